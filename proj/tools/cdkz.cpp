// Command-line front end: single protocol runs, parameter sweeps behind the
// figure-style data sets, window/cost queries, JSON config ingestion, and
// CSV/JSON persistence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cdkz/protocol.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace cdkz;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 12 significant digits, locale-independent; values are re-parsed so JSON
// output round-trips to exactly the printed precision.
std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double num12(double v) {
  if (std::isnan(v)) return v;
  return std::stod(fmt12(v));
}

struct Options {
  std::string model = "lz";
  std::string mode = "impulse";
  double tauq = 5.0;
  std::optional<double> g0;
  double delta = 1.0;
  double omega = 1.0;
  std::optional<int> n;
  std::optional<int> trunc;
  double m = 0.0;  // 0 -> model default steepness
  double eta = 0.0;
  int steps = 0;
  int samples = 1001;
  std::string out = "cdkz";

  // sweep grids (comma-separated lists; empty -> the scalar above)
  std::string tauq_list, eta_list, n_list, trunc_list, mode_list;
  std::string preset;
};

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_double_list(s)) out.push_back(static_cast<int>(v));
  return out;
}

protocol::ControlMode make_mode(const std::string& name, double eta,
                                double m) {
  if (name == "none") return protocol::ControlMode::uncontrolled();
  if (name == "full") return protocol::ControlMode::full();
  if (name == "impulse") return protocol::ControlMode::impulse(m);
  if (name == "window") return protocol::ControlMode::window(eta, m);
  throw ConfigError("unknown mode: " + name);
}

void validate(const Options& o) {
  if (o.model != "lz" && o.model != "tfim-momentum" && o.model != "tfim-spin") {
    throw ConfigError("unknown model: " + o.model);
  }
  if (!(o.tauq > 0.0)) throw ConfigError("tauq must be positive");
}

double resolved_g0(const Options& o) {
  if (o.g0) return *o.g0;
  if (o.model == "lz") return -10.0 * o.delta;
  return o.model == "tfim-spin" ? 0.01 : 0.0;
}

int resolved_n(const Options& o) {
  if (o.n) return *o.n;
  return o.model == "tfim-spin" ? 6 : 16;
}

struct RunOutput {
  protocol::RunResult result;
  json analytic;
};

RunOutput execute(const Options& o, const std::string& mode_name, double tauq,
                  double eta, int n, int trunc) {
  protocol::RunOptions ropts;
  ropts.steps = o.steps;
  ropts.samples = o.samples;
  const auto mode = make_mode(mode_name, eta, o.m);

  RunOutput out;
  if (o.model == "lz") {
    protocol::LzModel model(lz::LzParams(o.delta, resolved_g0(o), tauq));
    out.result = protocol::run_protocol(model, mode, ropts);
    out.analytic["C"] = num12(model.cost_analytic());
    const auto [de, ratio] = model.savings_analytic(out.result.window);
    out.analytic["deltaE"] = num12(de);
    out.analytic["ratio"] = num12(ratio);
    out.analytic["mu"] = num12(lz::impulse_half_width(model.params()));
    out.analytic["uncontrolled_fidelity"] =
        num12(1.0 - lz::transition_probability(model.params()));
  } else if (o.model == "tfim-momentum") {
    tfim::TfimParams params(n, o.omega, resolved_g0(o), tauq);
    out.result = protocol::run_momentum_protocol(params, mode, ropts);
    out.analytic["C"] = num12(tfim::cost_momentum_sum(params));
    const auto [de, ratio] =
        tfim::savings_momentum_sum(params, out.result.window);
    out.analytic["deltaE"] = num12(de);
    out.analytic["ratio"] = num12(ratio);
    out.analytic["lowest_mode_estimate"] =
        num12(tfim::lowest_mode_lz_estimate(params));
  } else {
    tfim::TfimParams params(n, o.omega, resolved_g0(o), tauq);
    if (trunc == 0) {
      // truncation 0 is shorthand for the uncontrolled run
      protocol::SpinTfimModel model(params, n / 2);
      out.result = protocol::run_protocol(
          model, protocol::ControlMode::uncontrolled(), ropts);
    } else {
      protocol::SpinTfimModel model(params, trunc);
      out.result = protocol::run_protocol(model, mode, ropts);
    }
  }
  return out;
}

json summary_json(const Options& o, const std::string& mode_name, double tauq,
                  const RunOutput& run) {
  const auto& res = run.result;
  json j;
  j["model"] = o.model;
  j["mode"] = mode_name;
  j["tauq"] = num12(tauq);
  j["final_fidelity"] = num12(res.trace.final_fidelity());
  j["infidelity"] = num12(1.0 - res.trace.final_fidelity());
  j["C"] = num12(res.report.cost);
  j["deltaE"] = num12(res.report.savings);
  j["ratio"] = num12(res.report.ratio);
  j["lower_bound"] = num12(res.report.lower_bound);
  j["max_norm_drift"] = num12(res.trace.max_norm_drift());
  j["window"] = {{"t_minus", num12(res.window.t_minus)},
                 {"t_plus", num12(res.window.t_plus)}};
  if (!run.analytic.empty()) j["analytic"] = run.analytic;
  return j;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << body;
  if (!out.good()) throw ConfigError("write failed: " + path);
}

void write_trace_csv(const std::string& path,
                     const protocol::SimulationTrace& trace) {
  std::string body = "t,fidelity,switching,norm_drift\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    body += fmt12(trace.times[i]) + "," + fmt12(trace.fidelity[i]) + "," +
            fmt12(trace.switching[i]) + "," + fmt12(trace.norm_drift[i]) +
            "\n";
  }
  write_file(path, body);
}

int cmd_run(const Options& o) {
  validate(o);
  const auto run = execute(o, o.mode, o.tauq, o.eta, resolved_n(o),
                           o.trunc.value_or(resolved_n(o) / 2));
  write_trace_csv(o.out + "_trace.csv", run.result.trace);
  write_file(o.out + "_summary.json",
             summary_json(o, o.mode, o.tauq, run).dump(2) + "\n");
  std::cout << summary_json(o, o.mode, o.tauq, run).dump(2) << "\n";
  return 0;
}

int cmd_window(const Options& o) {
  validate(o);
  json j;
  if (o.model == "lz") {
    lz::LzParams p(o.delta, resolved_g0(o), o.tauq);
    const auto w = lz::impulse_window(p);
    j["t_minus"] = num12(w.t_minus);
    j["t_plus"] = num12(w.t_plus);
    j["mu"] = num12(lz::impulse_half_width(p));
  } else {
    tfim::TfimParams p(resolved_n(o), o.omega, resolved_g0(o), o.tauq);
    const auto w = tfim::impulse_window(p);
    j["t_minus"] = num12(w.t_minus);
    j["t_plus"] = num12(w.t_plus);
    j["half_width"] = num12(w.half_width());
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_cost(const Options& o) {
  validate(o);
  json j;
  const auto mode = make_mode(o.mode, o.eta, o.m);
  if (o.model == "lz") {
    protocol::LzModel model(lz::LzParams(o.delta, resolved_g0(o), o.tauq));
    const auto w = protocol::control_window(model, mode);
    const double m_eff = o.m > 0 ? o.m : model.default_steepness();
    kzm::SwitchingFunction s(m_eff, w);
    const auto norm_fn = [&](double t) { return model.cd_norm(t); };
    j["C"] = num12(protocol::cost_numeric(norm_fn, o.tauq));
    const double de = protocol::savings_numeric(
        norm_fn, [&](double t) { return s(t); }, o.tauq);
    j["deltaE"] = num12(de);
    j["ratio"] = num12(de / protocol::cost_numeric(norm_fn, o.tauq));
    j["lower_bound"] = num12(protocol::cost_lower_bound(model));
    j["analytic"]["C"] = num12(model.cost_analytic());
    const auto [dea, ra] = model.savings_analytic(w);
    j["analytic"]["deltaE"] = num12(dea);
    j["analytic"]["ratio"] = num12(ra);
  } else {
    tfim::TfimParams params(resolved_n(o), o.omega, resolved_g0(o), o.tauq);
    const auto modes = tfim::momentum_modes(params);
    const auto w = o.mode == "window"
                       ? kzm::ImpulseWindow{0.5 * o.tauq - o.eta,
                                            0.5 * o.tauq + o.eta}
                       : tfim::impulse_window(params);
    const double m_eff = o.m > 0 ? o.m : 100.0 * o.omega;
    kzm::SwitchingFunction s(m_eff, w);
    const auto norm_fn = [&](double t) {
      double sum = 0.0;
      for (const auto& k : modes) sum += tfim::subspace_cd_norm(params, k, t);
      return sum;
    };
    j["C"] = num12(protocol::cost_numeric(norm_fn, o.tauq));
    const double de = protocol::savings_numeric(
        norm_fn, [&](double t) { return s(t); }, o.tauq);
    j["deltaE"] = num12(de);
    j["ratio"] = num12(de / protocol::cost_numeric(norm_fn, o.tauq));
    j["lower_bound"] = num12(protocol::momentum_cost_lower_bound(params));
    j["analytic"]["C"] = num12(tfim::cost_momentum_sum(params));
    const auto [dea, ra] = tfim::savings_momentum_sum(params, w);
    j["analytic"]["deltaE"] = num12(dea);
    j["analytic"]["ratio"] = num12(ra);
    const auto [det, rt] = tfim::savings_thermodynamic(params, w);
    j["thermodynamic"]["deltaE"] = num12(det);
    j["thermodynamic"]["ratio"] = num12(rt);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct SweepGrid {
  std::vector<double> tauq;
  std::vector<double> eta{0.0};
  std::vector<double> eta_frac;  // per-tauq fractions (preset fig1c)
  std::vector<int> n;
  std::vector<int> trunc;
  std::vector<std::string> modes;
  bool thermo_rows = false;  // fig3: add thermodynamic-limit rows
};

SweepGrid build_grid(Options& o) {
  SweepGrid g;
  if (o.preset == "fig1c") {
    o.model = "lz";
    g.tauq = {0.5, 1, 2, 3, 5, 8, 12, 18, 25};
    g.eta_frac = {0.025, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    g.n = {0};
    g.trunc = {0};
    g.modes = {"window"};
  } else if (o.preset == "fig2cd") {
    o.model = "tfim-momentum";
    g.tauq = {1, 2, 4, 8, 16, 32};
    g.n = {8, 16, 32, 64};
    g.trunc = {0};
    g.modes = {"none", "impulse"};
  } else if (o.preset == "fig3") {
    o.model = "tfim-momentum";
    g.tauq = {0.5, 1, 2, 5, 10, 20, 50};
    g.n = {4, 8, 12, 18};
    g.trunc = {0};
    g.modes = {"impulse"};
    g.thermo_rows = true;
  } else if (o.preset == "fig4") {
    o.model = "tfim-spin";
    g.tauq = {0.5, 1, 2, 3, 4, 6};
    g.n = {6};
    g.trunc = {0, 1, 2, 3};
    g.modes = {"full", "impulse"};
  } else if (!o.preset.empty()) {
    throw ConfigError("unknown preset: " + o.preset);
  } else {
    g.tauq = o.tauq_list.empty() ? std::vector<double>{o.tauq}
                                 : parse_double_list(o.tauq_list);
    g.eta = o.eta_list.empty() ? std::vector<double>{o.eta}
                               : parse_double_list(o.eta_list);
    g.n = o.n_list.empty() ? std::vector<int>{resolved_n(o)}
                           : parse_int_list(o.n_list);
    g.trunc = o.trunc_list.empty()
                  ? std::vector<int>{o.trunc.value_or(resolved_n(o) / 2)}
                  : parse_int_list(o.trunc_list);
    g.modes = o.mode_list.empty()
                  ? std::vector<std::string>{o.mode}
                  : [&] {
                      std::vector<std::string> ms;
                      std::stringstream ss(o.mode_list);
                      std::string item;
                      while (std::getline(ss, item, ','))
                        if (!item.empty()) ms.push_back(item);
                      return ms;
                    }();
  }
  if (g.tauq.empty() || g.n.empty() || g.trunc.empty() || g.modes.empty()) {
    throw ConfigError("sweep: empty grid");
  }
  return g;
}

int cmd_sweep(Options& o) {
  const SweepGrid grid = build_grid(o);
  validate(o);
  std::string body = "model,mode,tauq,eta,n,trunc,final_fidelity,C,deltaE,ratio\n";
  for (int n : grid.n) {
    for (int trunc : grid.trunc) {
      for (const auto& mode_name : grid.modes) {
        for (double tauq : grid.tauq) {
          std::vector<double> etas = grid.eta;
          if (!grid.eta_frac.empty()) {
            etas.clear();
            for (double f : grid.eta_frac) etas.push_back(f * tauq);
          }
          for (double eta : etas) {
            const std::string mode_eff =
                (o.model == "tfim-spin" && trunc == 0) ? "none" : mode_name;
            const auto run = execute(o, mode_eff, tauq, eta, n, trunc);
            body += o.model + "," + mode_eff + "," + fmt12(tauq) + "," +
                    fmt12(eta) + "," + std::to_string(n) + "," +
                    std::to_string(trunc) + "," +
                    fmt12(run.result.trace.final_fidelity()) + "," +
                    fmt12(run.result.report.cost) + "," +
                    fmt12(run.result.report.savings) + "," +
                    fmt12(run.result.report.ratio) + "\n";
          }
        }
      }
    }
  }
  if (grid.thermo_rows) {
    for (const auto& mode_name : grid.modes) {
      for (double tauq : grid.tauq) {
        tfim::TfimParams params(2, o.omega, resolved_g0(o), tauq);
        const auto w = tfim::impulse_window(params);
        const auto [de, ratio] = tfim::savings_thermodynamic(params, w);
        // per-spin savings: n column 0 marks the thermodynamic limit
        body += o.model + "," + mode_name + "," + fmt12(tauq) + ",0,0,0,," +
                "," + fmt12(de / params.n) + "," + fmt12(ratio) + "\n";
      }
    }
  }
  write_file(o.out, body);
  std::cerr << "wrote " << o.out << "\n";
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "lz | tfim-momentum | tfim-spin");
  cmd->add_option("--mode", o.mode, "none | full | impulse | window");
  cmd->add_option("--tauq", o.tauq, "quench time");
  cmd->add_option_function<double>(
      "--g0", [&o](double v) { o.g0 = v; }, "initial field");
  cmd->add_option("--delta", o.delta, "LZ gap parameter");
  cmd->add_option("--omega", o.omega, "TFIM energy scale");
  cmd->add_option_function<int>(
      "--n", [&o](int v) { o.n = v; }, "TFIM spin count");
  cmd->add_option_function<int>(
      "--trunc", [&o](int v) { o.trunc = v; }, "CD truncation range M");
  cmd->add_option("--m", o.m, "switching steepness (0 = model default)");
  cmd->add_option("--eta", o.eta, "window half-width (mode window)");
  cmd->add_option("--steps", o.steps, "integrator steps (0 = default)");
  cmd->add_option("--samples", o.samples, "trace samples");
  cmd->add_option("--out", o.out, "output path / prefix");
}

void apply_config(const std::string& path, CLI::App* cmd, Options& o) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  const auto given = [&](const std::string& flag) {
    const auto* opt = cmd->get_option_no_throw("--" + flag);
    return opt != nullptr && opt->count() > 0;
  };
  for (const auto& [key, value] : cfg.items()) {
    if (given(key)) continue;  // CLI flags override config values
    if (key == "model") o.model = value.get<std::string>();
    else if (key == "mode") o.mode = value.get<std::string>();
    else if (key == "tauq") o.tauq = value.get<double>();
    else if (key == "g0") o.g0 = value.get<double>();
    else if (key == "delta") o.delta = value.get<double>();
    else if (key == "omega") o.omega = value.get<double>();
    else if (key == "n") o.n = value.get<int>();
    else if (key == "trunc") o.trunc = value.get<int>();
    else if (key == "m") o.m = value.get<double>();
    else if (key == "eta") o.eta = value.get<double>();
    else if (key == "steps") o.steps = value.get<int>();
    else if (key == "samples") o.samples = value.get<int>();
    else if (key == "out") o.out = value.get<std::string>();
    else if (key == "preset") o.preset = value.get<std::string>();
    else throw ConfigError("unknown config key: " + key);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterdiabatic control in the Kibble-Zurek impulse regime"};
  app.require_subcommand(1);

  Options o;
  std::string config_path;

  auto* run = app.add_subcommand("run", "single protocol run -> CSV + JSON");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep -> long CSV");
  auto* window = app.add_subcommand("window", "print crossover times");
  auto* cost = app.add_subcommand("cost", "print cost, savings, lower bound");
  for (auto* cmd : {run, sweep, window, cost}) {
    add_common(cmd, o);
    cmd->add_option("--config", config_path, "JSON config file");
  }
  sweep->add_option("--preset", o.preset, "fig1c | fig2cd | fig3 | fig4");
  sweep->add_option("--tauq-list", o.tauq_list, "comma-separated tauq grid");
  sweep->add_option("--eta-list", o.eta_list, "comma-separated eta grid");
  sweep->add_option("--n-list", o.n_list, "comma-separated N grid");
  sweep->add_option("--trunc-list", o.trunc_list, "comma-separated M grid");
  sweep->add_option("--mode-list", o.mode_list, "comma-separated mode grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) apply_config(config_path, active, o);
    if (active == run) return cmd_run(o);
    if (active == sweep) return cmd_sweep(o);
    if (active == window) return cmd_window(o);
    return cmd_cost(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericsError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
