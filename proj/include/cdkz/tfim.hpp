#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cdkz/kzm.hpp"
#include "cdkz/numerics.hpp"

// Transverse-field Ising chain, H0 = -w sum_i [g sx_i + sz_i sz_{i+1}] with
// periodic boundaries, in two representations: decoupled momentum-space
// two-level subspaces (exact, scalable) and the dense spin basis with
// truncated-range counterdiabatic control (N <= 10).

namespace cdkz::tfim {

struct TfimParams {
  int n;                       // even spin count
  double omega;                // energy scale, > 0
  double b = 1.0;              // lattice spacing
  kzm::RampSchedule schedule;  // critical point pinned at g_c = 1

  TfimParams(int n_, double omega_, double g0, double tau_q);
};

struct MomentumMode {
  double k;
  int index;  // 1-based, k = pi (2 index - 1) / (N b)
};

std::vector<MomentumMode> momentum_modes(const TfimParams& p);

/// tan(theta_k) = [h_k^z - sqrt(h_k^x^2 + h_k^z^2)] / h_k^x.
double mixing_angle(const TfimParams& p, const MomentumMode& k, double g);

/// H_{0,k} = h_k^x sx - h_k^z sz with h^z = 2 w (g - cos kb),
/// h^x = 2 w sin(kb).
HermitianOperator subspace_hamiltonian(const TfimParams& p,
                                       const MomentumMode& k, double t);

double subspace_gap_at_field(const TfimParams& p, const MomentumMode& k,
                             double g);
double subspace_gap(const TfimParams& p, const MomentumMode& k, double t);

/// gamma_0 ~ 4 w |g - 1|, used only for the common impulse window.
double approximate_lowest_gap_at_field(const TfimParams& p, double g);

/// t-/+ = tau_q/2 -/+ sqrt(tau_q / (8 w (1 - g0))), clamped to (0, tau_q)
/// below the formula's short-quench validity threshold.
kzm::ImpulseWindow impulse_window(const TfimParams& p);

HermitianOperator subspace_cd_field(const TfimParams& p, const MomentumMode& k,
                                    double t);
double subspace_cd_norm(const TfimParams& p, const MomentumMode& k, double t);

StateVector subspace_ground_state(const TfimParams& p, const MomentumMode& k,
                                  double g);

/// Landau-Zener estimate of the uncontrolled final fidelity from the lowest
/// momentum subspace: 1 - exp[-(2 pi w/|gdot|) sin^2(pi/N)].
double lowest_mode_lz_estimate(const TfimParams& p);

// ---- spin basis ----

struct PauliString {
  double coeff;
  std::string labels;  // one of I X Y Z per site
};

ComplexMatrix pauli_string_matrix(const PauliString& s);

ComplexMatrix parity_operator(int n);  // prod_i sx_i

HermitianOperator spin_hamiltonian(const TfimParams& p, double t);

/// u_m(g) = (g^{2m} + g^N) / (8 g^{m+1} (1 + g^N)); limit at g = 0 is 1/8
/// for m = 1, 0 otherwise.
double u_coefficient(int m, double g, int n);

/// Range-m string content of the CD field in the spin basis of H0 above:
/// sum_n [sz_n (prod sx) sy_{n+m} + sy_n (prod sx) sz_{n+m}].
std::vector<PauliString> cd_range_strings(int n, int m);

/// Truncated CD field gdot sum_{m=1}^{M} w_m u_m(g) H_CD^{[m]} with
/// w_m = 1/2 at m = N/2 and 1 otherwise; M = N/2 is the exact field.
HermitianOperator truncated_cd_field(const TfimParams& p, int truncation,
                                     double t);

/// Phi[g] = int_0^pi arctan[(g - cos x)/sin x] dx.
double phi_integral(double g);

/// Finite-N cost under the per-mode-sum norm convention
/// ||H_CD|| = sum_{k>0} ||H_{CD,k}||, via the arctan sum.
double cost_momentum_sum(const TfimParams& p);

/// Step-function-switching savings from the finite-N arctan sums:
/// (deltaE, deltaE / C).
std::pair<double, double> savings_momentum_sum(const TfimParams& p,
                                               const kzm::ImpulseWindow& w);

/// Thermodynamic-limit savings via Phi[g]: (deltaE, deltaE / C).
std::pair<double, double> savings_thermodynamic(const TfimParams& p,
                                                const kzm::ImpulseWindow& w);

}  // namespace cdkz::tfim
