#include "cdkz/kzm.hpp"

#include <cmath>
#include <stdexcept>

#include "cdkz/numerics.hpp"

namespace cdkz::kzm {

RampSchedule::RampSchedule(double g0_, double g_c_, double tau_q_)
    : g0(g0_), g_c(g_c_), tau_q(tau_q_) {
  if (!(tau_q > 0.0)) {
    throw std::invalid_argument("RampSchedule: tau_q must be positive");
  }
  if (g_c == g0) {
    throw std::invalid_argument("RampSchedule: drive span 2(g_c - g0) is zero");
  }
}

SwitchingFunction::SwitchingFunction(double steepness, ImpulseWindow window)
    : m_(steepness), window_(window) {
  if (!(m_ > 0.0)) {
    throw std::invalid_argument("SwitchingFunction: steepness must be > 0");
  }
}

double SwitchingFunction::operator()(double t) const {
  const auto logistic = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  return logistic(m_ * (t - window_.t_minus)) *
         logistic(m_ * (window_.t_plus - t));
}

ImpulseWindow impulse_window_generic(
    const RampSchedule& s, const std::function<double(double)>& gap) {
  const auto residual = [&](double t) {
    const double g = gap(s.value(t));
    if (!std::isfinite(g)) {
      throw NumericsError("impulse_window_generic: non-finite gap");
    }
    return 1.0 / g - (0.5 * s.tau_q - t);
  };
  const double r0 = residual(0.0);
  const double rc = residual(0.5 * s.tau_q);
  if (r0 >= 0.0) {
    return {0.0, s.tau_q};  // relaxation slower than the whole ramp
  }
  if (rc <= 0.0) {
    return {0.5 * s.tau_q, 0.5 * s.tau_q};  // no impulse regime
  }
  const double t_minus = bisect_root(residual, 0.0, 0.5 * s.tau_q);
  return {t_minus, s.tau_q - t_minus};
}

ImpulseWindow kzm_predicted_window(const RampSchedule& s,
                                   const ScalingExponents& e) {
  const double znu = e.z * e.nu;
  const double half_width =
      std::pow(e.tau0, 1.0 / (1.0 + znu)) *
      std::pow(0.5 * s.tau_q / std::abs(s.g0 - s.g_c), znu / (1.0 + znu));
  const double hw = std::min(half_width, 0.5 * s.tau_q);
  return {0.5 * s.tau_q - hw, 0.5 * s.tau_q + hw};
}

double correlation_length(const RampSchedule& s, const ScalingExponents& e) {
  const double base = 2.0 * e.tau0 * std::abs(s.g0 - s.g_c) / s.tau_q;
  return e.xi0 * std::pow(base, -e.nu / (1.0 + e.z * e.nu));
}

double defect_density(const RampSchedule& s, const ScalingExponents& e) {
  return std::pow(correlation_length(s, e), -static_cast<double>(e.d));
}

double fit_freeze_out_exponent(
    const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) {
    throw std::invalid_argument("fit_freeze_out_exponent: need >= 3 samples");
  }
  double sx = 0, sy = 0;
  for (const auto& [tq, mu] : samples) {
    if (!(tq > 0.0) || !(mu > 0.0)) {
      throw std::invalid_argument(
          "fit_freeze_out_exponent: samples must be positive");
    }
    sx += std::log(tq);
    sy += std::log(mu);
  }
  const double n = static_cast<double>(samples.size());
  const double mx = sx / n, my = sy / n;
  double num = 0, den = 0;
  for (const auto& [tq, mu] : samples) {
    const double dx = std::log(tq) - mx;
    num += dx * (std::log(mu) - my);
    den += dx * dx;
  }
  return num / den;
}

}  // namespace cdkz::kzm
