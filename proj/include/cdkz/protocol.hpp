#pragma once

#include <memory>
#include <vector>

#include "cdkz/kzm.hpp"
#include "cdkz/lz.hpp"
#include "cdkz/numerics.hpp"
#include "cdkz/tfim.hpp"

// Assembles the kappa-mode total Hamiltonian H0 + [d_{1k} + d_{2k} S(t)] Hcd,
// runs complete protocols, and computes the figures of merit: fidelity trace,
// cost, savings, and the adiabatic-weight lower bound on the cost.

namespace cdkz::protocol {

struct ControlMode {
  enum class Kind { Uncontrolled, Full, Impulse, Window };

  Kind kind = Kind::Uncontrolled;
  double eta = 0.0;        // half-width for Kind::Window
  double steepness = 0.0;  // logistic m; 0 means the model default

  static ControlMode uncontrolled() { return {Kind::Uncontrolled, 0.0, 0.0}; }
  static ControlMode full() { return {Kind::Full, 0.0, 0.0}; }
  static ControlMode impulse(double m = 0.0) { return {Kind::Impulse, 0.0, m}; }
  static ControlMode window(double eta, double m = 0.0) {
    return {Kind::Window, eta, m};
  }
};

struct SimulationTrace {
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<double> switching;
  std::vector<double> norm_drift;

  double final_fidelity() const { return fidelity.back(); }
  double max_norm_drift() const;
};

struct CostReport {
  double cost = 0.0;         // C, the time-averaged CD norm
  double savings = 0.0;      // deltaE with the run's actual switching
  double ratio = 0.0;        // deltaE / C
  double lower_bound = 0.0;  // adiabatic-weight bound on C; NaN if n/a

  // Step-function analytic cross-checks; NaN when the model has none.
  double cost_analytic;
  double savings_analytic;
  double ratio_analytic;
};

struct RunOptions {
  int steps = 0;        // 0 -> default_steps(tau_q, energy scale)
  int samples = 1001;   // trace sampling density
  double quad_rel_tol = 1e-9;
};

struct RunResult {
  SimulationTrace trace;
  CostReport report;
  kzm::ImpulseWindow window;  // window actually used for switching
};

/// A model the generic protocol runner can drive: a dense H0/Hcd pair with
/// a ramp schedule, instantaneous ground states, and the ingredients of the
/// cost lower bound (independent blocks of H0 as functions of the field).
class DrivenModel {
 public:
  virtual ~DrivenModel() = default;

  virtual const kzm::RampSchedule& schedule() const = 0;
  virtual kzm::ImpulseWindow impulse_window() const = 0;
  virtual double default_steepness() const = 0;
  virtual double energy_scale() const = 0;

  virtual ComplexMatrix h0(double t) const = 0;
  virtual ComplexMatrix h_cd(double t) const = 0;
  virtual StateVector ground_state(double t) const = 0;
  virtual double cd_norm(double t) const = 0;

  virtual int block_count() const = 0;
  virtual ComplexMatrix block_h0(int block, double g) const = 0;
  virtual ComplexMatrix block_dh0_dg(int block, double g) const = 0;

  // Whether the adiabatic-weight bound is meaningful and tractable for
  // this model. Dense many-body spectra have near-degenerate excited
  // avoided crossings where W[g] spikes; there the per-pair sum is not a
  // useful bound and its quadrature does not converge at sane cost.
  virtual bool has_lower_bound() const { return true; }

  // Step-function analytic cost/savings, when closed forms exist.
  virtual bool has_analytic_cost() const { return false; }
  virtual double cost_analytic() const;
  virtual std::pair<double, double> savings_analytic(
      const kzm::ImpulseWindow& w) const;
};

class LzModel : public DrivenModel {
 public:
  explicit LzModel(lz::LzParams params);

  const lz::LzParams& params() const { return params_; }
  const kzm::RampSchedule& schedule() const override;
  kzm::ImpulseWindow impulse_window() const override;
  double default_steepness() const override;  // 400 / Delta
  double energy_scale() const override;
  ComplexMatrix h0(double t) const override;
  ComplexMatrix h_cd(double t) const override;
  StateVector ground_state(double t) const override;
  double cd_norm(double t) const override;
  int block_count() const override { return 1; }
  ComplexMatrix block_h0(int block, double g) const override;
  ComplexMatrix block_dh0_dg(int block, double g) const override;
  bool has_analytic_cost() const override { return true; }
  double cost_analytic() const override;
  std::pair<double, double> savings_analytic(
      const kzm::ImpulseWindow& w) const override;

 private:
  lz::LzParams params_;
};

/// Dense spin-basis TFIM with truncated-range CD control. The ground state
/// is the even-parity member of the lowest level; the cost norm is the
/// Frobenius norm of the truncated field actually applied.
class SpinTfimModel : public DrivenModel {
 public:
  SpinTfimModel(tfim::TfimParams params, int truncation);

  const tfim::TfimParams& params() const { return params_; }
  int truncation() const { return truncation_; }
  const kzm::RampSchedule& schedule() const override;
  kzm::ImpulseWindow impulse_window() const override;
  double default_steepness() const override;  // 100 / omega
  double energy_scale() const override;
  ComplexMatrix h0(double t) const override;
  ComplexMatrix h_cd(double t) const override;
  StateVector ground_state(double t) const override;
  double cd_norm(double t) const override;
  int block_count() const override { return 1; }
  ComplexMatrix block_h0(int block, double g) const override;
  ComplexMatrix block_dh0_dg(int block, double g) const override;
  bool has_lower_bound() const override { return false; }

 private:
  tfim::TfimParams params_;
  int truncation_;
  ComplexMatrix field_part_;     // -w sum sx_i
  ComplexMatrix coupling_part_;  // -w sum sz_i sz_{i+1}
  ComplexMatrix parity_;
  std::vector<ComplexMatrix> cd_ranges_;  // H_CD^{[m]}, m = 1..truncation
};

int default_steps(double tau_q, double energy_scale);

kzm::ImpulseWindow control_window(const DrivenModel& model,
                                  const ControlMode& mode);

ComplexMatrix assemble_hamiltonian(const DrivenModel& model,
                                   const ControlMode& mode, double t);

RunResult run_protocol(const DrivenModel& model, const ControlMode& mode,
                       const RunOptions& opts = {});

double cost_numeric(const std::function<double(double)>& cd_norm, double tau_q,
                    double rel_tol = 1e-9);
double savings_numeric(const std::function<double(double)>& cd_norm,
                       const std::function<double(double)>& switching,
                       double tau_q, double rel_tol = 1e-9);

/// W[g] = sqrt(sum_{n, m != n} |<phi_m| dH |phi_n> / (e_n - e_m)|^2).
/// Pairs inside a degenerate level are excluded; the remaining sum is
/// invariant under the eigensolver's basis choice within each level.
double adiabatic_weight(const HermitianOperator& h, const ComplexMatrix& dh,
                        double degeneracy_tol = 1e-12);

/// (1/tau_q) integral over the ramp of sum_blocks W[g] dg; attained by the
/// monotonic linear ramp, so it equals the numeric cost.
double cost_lower_bound(const DrivenModel& model, double rel_tol = 1e-9);

/// Momentum-space TFIM protocol: every subspace evolves independently and
/// the trace carries the ordered-product fidelity. Cost uses the per-mode
/// norm-sum convention.
RunResult run_momentum_protocol(const tfim::TfimParams& params,
                                const ControlMode& mode,
                                const RunOptions& opts = {});

double momentum_cost_lower_bound(const tfim::TfimParams& params,
                                 double rel_tol = 1e-9);

}  // namespace cdkz::protocol
