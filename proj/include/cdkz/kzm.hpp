#pragma once

#include <functional>
#include <utility>
#include <vector>

// Linear ramp schedules, the adiabatic-impulse crossover solver, Kibble-Zurek
// scaling predictions, and the logistic switching function.

namespace cdkz::kzm {

/// Linear drive g(t) = g0 + 2(g_c - g0) t / tau_q. The symmetric-crossing
/// convention fixes g(tau_q / 2) = g_c.
struct RampSchedule {
  double g0;
  double g_c;
  double tau_q;

  RampSchedule(double g0_, double g_c_, double tau_q_);

  double value(double t) const { return g0 + 2.0 * (g_c - g0) * t / tau_q; }
  double rate() const { return 2.0 * (g_c - g0) / tau_q; }
  double final_value() const { return 2.0 * g_c - g0; }
};

/// The pair (t-, t+) splitting a ramp into adiabatic / impulse / adiabatic.
struct ImpulseWindow {
  double t_minus;
  double t_plus;

  double half_width() const { return 0.5 * (t_plus - t_minus); }
  double duration() const { return t_plus - t_minus; }
  double center() const { return 0.5 * (t_minus + t_plus); }
};

/// S(t) = f(t - t-) f(t+ - t) with the logistic f(x) = 1/(1 + e^{-m x}).
class SwitchingFunction {
 public:
  SwitchingFunction(double steepness, ImpulseWindow window);

  double operator()(double t) const;
  double steepness() const { return m_; }
  const ImpulseWindow& window() const { return window_; }

 private:
  double m_;
  ImpulseWindow window_;
};

struct ScalingExponents {
  double nu;    // spatial exponent
  double z;     // dynamical exponent
  double tau0;  // relaxation-time prefactor
  double xi0;   // correlation-length prefactor
  int d;        // spatial dimension
};

/// Crossover times from the exact condition tau(g(t)) = |t - tau_q/2| with
/// tau = 1/gap, solved by bisection on [0, tau_q/2]. A ramp that is
/// impulsive throughout yields (0, tau_q); one with no impulse regime
/// yields the degenerate window (tau_q/2, tau_q/2).
ImpulseWindow impulse_window_generic(const RampSchedule& s,
                                     const std::function<double(double)>& gap);

/// Scaling-theory freeze-out prediction, clamped to [0, tau_q].
ImpulseWindow kzm_predicted_window(const RampSchedule& s,
                                   const ScalingExponents& e);

double correlation_length(const RampSchedule& s, const ScalingExponents& e);
double defect_density(const RampSchedule& s, const ScalingExponents& e);

/// Least-squares slope of log(mu) against log(tau_q); needs >= 3 samples.
double fit_freeze_out_exponent(
    const std::vector<std::pair<double, double>>& samples);

}  // namespace cdkz::kzm
