#include "cdkz/lz.hpp"

#include <cmath>
#include <stdexcept>

namespace cdkz::lz {

LzParams::LzParams(double delta_, double g0, double tau_q)
    : delta(delta_), schedule(g0, 0.0, tau_q) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("LzParams: delta must be positive");
  }
}

double mixing_angle(const LzParams& p, double t) {
  const double g = p.schedule.value(t);
  return std::atan(-(g + std::hypot(p.delta, g)) / p.delta);
}

HermitianOperator hamiltonian(const LzParams& p, double t) {
  return HermitianOperator(p.delta * pauli_x() +
                           p.schedule.value(t) * pauli_z());
}

std::pair<StateVector, StateVector> eigenstates(const LzParams& p, double t) {
  const double th = mixing_angle(p, t);
  StateVector ground(2), excited(2);
  ground << std::cos(th), std::sin(th);
  excited << std::sin(th), -std::cos(th);
  return {ground, excited};
}

StateVector ground_state(const LzParams& p, double t) {
  return eigenstates(p, t).first;
}

double gap_at_field(const LzParams& p, double g) {
  return 2.0 * std::hypot(g, p.delta);
}

double gap(const LzParams& p, double t) {
  return gap_at_field(p, p.schedule.value(t));
}

HermitianOperator cd_field(const LzParams& p, double t) {
  const double g = p.schedule.value(t);
  const double coeff =
      -p.schedule.rate() * p.delta / (2.0 * (p.delta * p.delta + g * g));
  return HermitianOperator(coeff * pauli_y());
}

double cd_norm(const LzParams& p, double t) {
  const double g = p.schedule.value(t);
  return std::sqrt(2.0) * std::abs(p.schedule.rate()) * p.delta /
         (2.0 * (p.delta * p.delta + g * g));
}

double impulse_half_width(const LzParams& p) {
  const double tq = p.schedule.tau_q;
  const double d2 = p.delta * p.delta;
  const double g0 = p.schedule.g0;
  const double disc =
      std::sqrt(tq * tq * tq * tq * d2 * d2 + 4.0 * g0 * g0 * tq * tq) -
      tq * tq * d2;
  return 0.5 * std::sqrt(disc / (2.0 * g0 * g0));
}

kzm::ImpulseWindow impulse_window(const LzParams& p) {
  const double mu = impulse_half_width(p);
  return {0.5 * p.schedule.tau_q - mu, 0.5 * p.schedule.tau_q + mu};
}

double transition_probability(const LzParams& p) {
  const double gdot = p.schedule.rate();
  if (gdot == 0.0) {
    throw std::invalid_argument("transition_probability: ramp rate is zero");
  }
  return std::exp(-M_PI * p.delta * p.delta / std::abs(gdot));
}

double cost_analytic(const LzParams& p) {
  return -std::sqrt(2.0) / p.schedule.tau_q *
         std::atan(p.schedule.g0 / p.delta);
}

std::pair<double, double> savings_analytic(const LzParams& p,
                                           const kzm::ImpulseWindow& w) {
  const double a0 = std::atan(p.schedule.g0 / p.delta);
  const double am = std::atan(p.schedule.value(w.t_minus) / p.delta);
  const double de = std::sqrt(2.0) / p.schedule.tau_q * (am - a0);
  return {de, 1.0 - am / a0};
}

}  // namespace cdkz::lz
