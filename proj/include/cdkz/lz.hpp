#pragma once

#include <utility>

#include "cdkz/kzm.hpp"
#include "cdkz/numerics.hpp"

// Closed forms of the Landau-Zener model: H0 = Delta sx + g(t) sz (hbar = 1),
// its eigenstates and gap, the counterdiabatic field, the impulse half-width,
// the asymptotic transition probability, and the analytic cost/savings.

namespace cdkz::lz {

struct LzParams {
  double delta;               // minimal-gap parameter, > 0
  kzm::RampSchedule schedule; // avoided crossing pinned at g_c = 0

  LzParams(double delta_, double g0, double tau_q);
};

/// tan(theta) = -[g + sqrt(Delta^2 + g^2)] / Delta; ground state is
/// cos(theta)|0> + sin(theta)|1>.
double mixing_angle(const LzParams& p, double t);

HermitianOperator hamiltonian(const LzParams& p, double t);

/// (ground, excited), orthonormal, real amplitudes.
std::pair<StateVector, StateVector> eigenstates(const LzParams& p, double t);

StateVector ground_state(const LzParams& p, double t);

double gap_at_field(const LzParams& p, double g);   // 2 sqrt(g^2 + Delta^2)
double gap(const LzParams& p, double t);

HermitianOperator cd_field(const LzParams& p, double t);

/// Frobenius norm of the CD field, sqrt(2) |gdot| Delta / (2 (Delta^2+g^2)).
double cd_norm(const LzParams& p, double t);

/// Closed-form impulse half-width mu; window is (tau_q/2 - mu, tau_q/2 + mu).
double impulse_half_width(const LzParams& p);
kzm::ImpulseWindow impulse_window(const LzParams& p);

/// exp(-pi Delta^2 / |gdot|), the excitation probability of the
/// uncontrolled asymptotic sweep.
double transition_probability(const LzParams& p);

/// C = -(sqrt(2)/tau_q) arctan(g0/Delta) for the symmetric ramp.
double cost_analytic(const LzParams& p);

/// Step-function-switching savings: (deltaE, deltaE / C).
std::pair<double, double> savings_analytic(const LzParams& p,
                                           const kzm::ImpulseWindow& w);

}  // namespace cdkz::lz
