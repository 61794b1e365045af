#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cdkz/protocol.hpp"

using namespace cdkz;
using protocol::ControlMode;
using protocol::RunOptions;

namespace {

protocol::LzModel lz_model(double tau_q) {
  return protocol::LzModel(lz::LzParams(1.0, -10.0, tau_q));
}

ComplexMatrix kron2(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("hamiltonian assembly per mode") {
  auto model = lz_model(5.0);
  const double t = 2.5;
  auto h_unc = protocol::assemble_hamiltonian(model, ControlMode::uncontrolled(), t);
  CHECK((h_unc - model.h0(t)).norm() < 1e-14);
  auto h_full = protocol::assemble_hamiltonian(model, ControlMode::full(), t);
  CHECK((h_full - (model.h0(t) + model.h_cd(t))).norm() < 1e-14);
  // impulse switching is fully on at the window center
  auto h_imp = protocol::assemble_hamiltonian(model, ControlMode::impulse(), t);
  CHECK((h_imp - h_full).norm() < 1e-12);
  // and off at the edges of the ramp
  auto h_edge = protocol::assemble_hamiltonian(model, ControlMode::impulse(), 0.0);
  CHECK((h_edge - model.h0(0.0)).norm() < 1e-12);
}

TEST_CASE("control window selection") {
  auto model = lz_model(5.0);
  auto w_imp = protocol::control_window(model, ControlMode::impulse());
  CHECK(w_imp.center() == doctest::Approx(2.5));
  auto w_custom = protocol::control_window(model, ControlMode::window(1.0));
  CHECK(w_custom.t_minus == doctest::Approx(1.5));
  CHECK(w_custom.t_plus == doctest::Approx(3.5));
  CHECK_THROWS_AS(protocol::control_window(model, ControlMode::window(-0.1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(protocol::control_window(model, ControlMode::window(2.6)),
                  std::invalid_argument);
}

TEST_CASE("avoided crossing: full control is transitionless") {
  for (double tau_q : {1.0, 5.0}) {
    auto res = protocol::run_protocol(lz_model(tau_q), ControlMode::full());
    CHECK(1.0 - res.trace.final_fidelity() < 1e-6);
    // fidelity stays pinned at 1 along the whole ramp
    const double worst =
        *std::min_element(res.trace.fidelity.begin(), res.trace.fidelity.end());
    CHECK(1.0 - worst < 1e-6);
    CHECK(res.trace.max_norm_drift() < 1e-8);
  }
}

TEST_CASE("avoided crossing: uncontrolled ramp matches the closed form") {
  auto model = lz_model(5.0);
  auto res = protocol::run_protocol(model, ControlMode::uncontrolled());
  // frozen oracle 0.542274; asymptotic formula within 0.01
  CHECK(res.trace.final_fidelity() == doctest::Approx(0.542274).epsilon(5e-4));
  const double predicted = 1.0 - lz::transition_probability(model.params());
  CHECK(std::abs(res.trace.final_fidelity() - predicted) < 0.01);
  // uncontrolled run spends nothing
  CHECK(res.report.savings == doctest::Approx(res.report.cost).epsilon(1e-12));
  CHECK(res.report.ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("avoided crossing: fidelity dips in the impulse regime and revives") {
  auto res = protocol::run_protocol(lz_model(25.0), ControlMode::uncontrolled());
  const double worst =
      *std::min_element(res.trace.fidelity.begin(), res.trace.fidelity.end());
  CHECK(worst < res.trace.final_fidelity() - 0.01);
}

TEST_CASE("avoided crossing: impulse-windowed control") {
  auto res = protocol::run_protocol(lz_model(5.0), ControlMode::impulse());
  // frozen oracle: infidelity 4.25e-5, C = 0.416098, deltaE = 0.162715
  CHECK(1.0 - res.trace.final_fidelity() < 1e-4);
  CHECK(res.report.cost == doctest::Approx(0.416098).epsilon(1e-5));
  CHECK(res.report.savings == doctest::Approx(0.162715).epsilon(1e-3));
  CHECK(res.report.ratio == doctest::Approx(0.3910).epsilon(2e-3));
  // numeric cost agrees with the closed form to quadrature accuracy
  CHECK(res.report.cost ==
        doctest::Approx(res.report.cost_analytic).epsilon(1e-9));
  // the smoothed savings track the step-function form at m = 400
  CHECK(res.report.savings ==
        doctest::Approx(res.report.savings_analytic).epsilon(0.02));
}

TEST_CASE("cost report invariants") {
  for (double tau_q : {2.0, 5.0, 12.0}) {
    auto res = protocol::run_protocol(lz_model(tau_q), ControlMode::impulse());
    CHECK(res.report.cost > 0.0);
    CHECK(res.report.savings >= 0.0);
    CHECK(res.report.savings <= res.report.cost);
    CHECK(res.report.ratio >= 0.0);
    CHECK(res.report.ratio <= 1.0);
    CHECK(res.report.lower_bound <= res.report.cost * (1.0 + 1e-9));
  }
}

TEST_CASE("window-mode extremes reduce to full and uncontrolled") {
  auto model = lz_model(1.0);
  RunOptions opts;
  opts.steps = 40000;
  auto full = protocol::run_protocol(model, ControlMode::full(), opts);
  // eta = tau_q/2 with a very steep switch is the full protocol
  auto wide =
      protocol::run_protocol(model, ControlMode::window(0.5, 1e8), opts);
  CHECK(std::abs(wide.trace.final_fidelity() - full.trace.final_fidelity()) <
        1e-9);
  // eta = 0 leaves only a width ~1/m sliver of control at the center;
  // agreement with the uncontrolled run is limited by how the step grid
  // samples that sliver
  auto unc = protocol::run_protocol(model, ControlMode::uncontrolled(), opts);
  auto none =
      protocol::run_protocol(model, ControlMode::window(0.0, 1e8), opts);
  CHECK(std::abs(none.trace.final_fidelity() - unc.trace.final_fidelity()) <
        1e-4);
}

TEST_CASE("widening the window never increases the unsaved share") {
  auto model = lz_model(5.0);
  double prev = 1e300;
  for (double eta : {0.1, 0.3, 0.8, 1.5, 2.5}) {
    auto res = protocol::run_protocol(model, ControlMode::window(eta));
    CHECK(res.report.savings <= prev + 1e-12);
    prev = res.report.savings;
  }
}

TEST_CASE("fidelity knee sits at the crossover half-width") {
  // frozen oracles at tau_q = 5: F(eta = mu) = 0.999957,
  // F(eta = mu/4) = 0.772021, F(eta = tau_q/2) = 1.000000
  auto model = lz_model(5.0);
  const double mu = lz::impulse_half_width(model.params());
  auto at = [&](double eta) {
    return protocol::run_protocol(model, ControlMode::window(eta))
        .trace.final_fidelity();
  };
  CHECK(at(mu) == doctest::Approx(0.999957).epsilon(1e-4));
  CHECK(at(0.25 * mu) == doctest::Approx(0.772021).epsilon(1e-3));
  CHECK(at(2.5) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(at(mu) > at(0.5 * mu));
  CHECK(at(0.5 * mu) > at(0.25 * mu));
}

TEST_CASE("cost lower bound is attained by the linear ramp") {
  auto model = lz_model(5.0);
  const double bound = protocol::cost_lower_bound(model);
  CHECK(bound == doctest::Approx(model.cost_analytic()).epsilon(1e-6));

  tfim::TfimParams params(8, 1.0, 0.0, 10.0);
  const double mbound = protocol::momentum_cost_lower_bound(params);
  CHECK(mbound == doctest::Approx(tfim::cost_momentum_sum(params)).epsilon(1e-6));
}

TEST_CASE("adiabatic weight handles symmetry-protected degeneracies") {
  // sz x 1 has a doubly degenerate spectrum but dh = 1 x sz does not
  // couple the degenerate pairs.
  ComplexMatrix big = kron2(pauli_z(), ComplexMatrix::Identity(2, 2));
  ComplexMatrix dh = kron2(ComplexMatrix::Identity(2, 2), pauli_z());
  CHECK(protocol::adiabatic_weight(HermitianOperator(big), dh) ==
        doctest::Approx(0.0));
  // a perturbation acting only inside degenerate levels contributes nothing
  ComplexMatrix dh_deg = kron2(ComplexMatrix::Identity(2, 2), pauli_x());
  CHECK(protocol::adiabatic_weight(HermitianOperator(big), dh_deg) ==
        doctest::Approx(0.0));
  // cross-level couplings survive: W for sz with dh = sx is 1/2
  CHECK(protocol::adiabatic_weight(HermitianOperator(pauli_z()), pauli_x()) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("momentum-space chain: full control is transitionless") {
  tfim::TfimParams params(16, 1.0, 0.0, 10.0);
  auto res = protocol::run_momentum_protocol(params, ControlMode::full());
  CHECK(1.0 - res.trace.final_fidelity() < 1e-6);
  const double worst =
      *std::min_element(res.trace.fidelity.begin(), res.trace.fidelity.end());
  CHECK(1.0 - worst < 1e-6);
  CHECK(res.trace.max_norm_drift() < 1e-8);
}

TEST_CASE("momentum-space chain: uncontrolled and impulse fidelities") {
  tfim::TfimParams params(16, 1.0, 0.0, 10.0);
  auto unc =
      protocol::run_momentum_protocol(params, ControlMode::uncontrolled());
  // frozen oracle 0.70310; lowest-mode estimate within 0.05
  CHECK(unc.trace.final_fidelity() == doctest::Approx(0.70310).epsilon(1e-3));
  CHECK(std::abs(unc.trace.final_fidelity() -
                 tfim::lowest_mode_lz_estimate(params)) < 0.05);

  auto imp = protocol::run_momentum_protocol(params, ControlMode::impulse());
  // frozen oracle 0.98185
  CHECK(imp.trace.final_fidelity() == doctest::Approx(0.98185).epsilon(1e-3));
  CHECK(imp.trace.final_fidelity() > unc.trace.final_fidelity());
  // energetics cross-check against the arctan sums
  CHECK(imp.report.cost ==
        doctest::Approx(imp.report.cost_analytic).epsilon(1e-8));
  CHECK(imp.report.savings ==
        doctest::Approx(imp.report.savings_analytic).epsilon(0.02));
}

TEST_CASE("spin chain: exact counterdiabatic control at full range") {
  tfim::TfimParams params(4, 1.0, 0.01, 3.0);
  protocol::SpinTfimModel model(params, 2);
  auto res = protocol::run_protocol(model, ControlMode::full());
  CHECK(1.0 - res.trace.final_fidelity() < 1e-6);
}

TEST_CASE("spin chain matches the momentum representation") {
  tfim::TfimParams params(4, 1.0, 0.01, 3.0);
  protocol::SpinTfimModel model(params, 2);

  auto spin_unc = protocol::run_protocol(model, ControlMode::uncontrolled());
  auto mom_unc =
      protocol::run_momentum_protocol(params, ControlMode::uncontrolled());
  // frozen oracle 0.98254885 in both representations
  CHECK(spin_unc.trace.final_fidelity() ==
        doctest::Approx(0.98254885).epsilon(1e-5));
  CHECK(std::abs(spin_unc.trace.final_fidelity() -
                 mom_unc.trace.final_fidelity()) < 1e-4);

  auto spin_full = protocol::run_protocol(model, ControlMode::full());
  auto mom_full = protocol::run_momentum_protocol(params, ControlMode::full());
  CHECK(std::abs(spin_full.trace.final_fidelity() -
                 mom_full.trace.final_fidelity()) < 1e-6);
}

TEST_CASE("spin chain: truncation hierarchy under the full quench") {
  tfim::TfimParams params(6, 1.0, 0.01, 0.5);
  RunOptions opts;
  opts.steps = 30000;
  auto unc = protocol::run_protocol(protocol::SpinTfimModel(params, 3),
                                    ControlMode::uncontrolled(), opts);
  double prev = unc.trace.final_fidelity();
  for (int m = 1; m <= 3; ++m) {
    auto res = protocol::run_protocol(protocol::SpinTfimModel(params, m),
                                      ControlMode::full(), opts);
    CHECK(res.trace.final_fidelity() > prev);
    prev = res.trace.final_fidelity();
  }
  CHECK(1.0 - prev < 1e-6);  // M = N/2 is exact
}

TEST_CASE("spin chain conserves parity") {
  tfim::TfimParams params(4, 1.0, 0.01, 2.0);
  protocol::SpinTfimModel model(params, 2);
  const ComplexMatrix parity = tfim::parity_operator(4);
  const ControlMode mode = ControlMode::impulse();
  const Generator gen = [&](double t) {
    return protocol::assemble_hamiltonian(model, mode, t);
  };
  auto states = propagate(gen, model.ground_state(0.0), 0.0, 2.0, 20000, 21);
  for (const auto& ts : states) {
    const double expect = (ts.psi.adjoint() * parity * ts.psi)(0, 0).real();
    CHECK(expect == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("default step heuristic") {
  CHECK(protocol::default_steps(1.0, 1.0) == 20000);
  CHECK(protocol::default_steps(10.0, 1.0) == 40000);
  CHECK(protocol::default_steps(10.0, 3.0) == 120000);
}
