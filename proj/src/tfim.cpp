#include "cdkz/tfim.hpp"

#include <cmath>
#include <stdexcept>

namespace cdkz::tfim {

namespace {

constexpr int kMaxDenseSpins = 10;

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix single_site(char label) {
  switch (label) {
    case 'I':
      return ComplexMatrix::Identity(2, 2);
    case 'X':
      return pauli_x();
    case 'Y':
      return pauli_y();
    case 'Z':
      return pauli_z();
    default:
      throw std::invalid_argument(std::string("unknown Pauli label: ") + label);
  }
}

void check_dense_size(int n) {
  if (n > kMaxDenseSpins) {
    throw std::invalid_argument(
        "spin-basis representation limited to N <= " +
        std::to_string(kMaxDenseSpins));
  }
}

}  // namespace

TfimParams::TfimParams(int n_, double omega_, double g0, double tau_q)
    : n(n_), omega(omega_), schedule(g0, 1.0, tau_q) {
  if (n <= 0 || n % 2 != 0) {
    throw std::invalid_argument("TfimParams: N must be a positive even integer");
  }
  if (!(omega > 0.0)) {
    throw std::invalid_argument("TfimParams: omega must be positive");
  }
}

std::vector<MomentumMode> momentum_modes(const TfimParams& p) {
  std::vector<MomentumMode> modes;
  modes.reserve(p.n / 2);
  for (int idx = 1; idx <= p.n / 2; ++idx) {
    modes.push_back({M_PI * (2 * idx - 1) / (p.n * p.b), idx});
  }
  return modes;
}

double mixing_angle(const TfimParams& p, const MomentumMode& k, double g) {
  const double hz = 2.0 * p.omega * (g - std::cos(k.k * p.b));
  const double hx = 2.0 * p.omega * std::sin(k.k * p.b);
  return std::atan((hz - std::hypot(hx, hz)) / hx);
}

HermitianOperator subspace_hamiltonian(const TfimParams& p,
                                       const MomentumMode& k, double t) {
  const double g = p.schedule.value(t);
  const double hz = 2.0 * p.omega * (g - std::cos(k.k * p.b));
  const double hx = 2.0 * p.omega * std::sin(k.k * p.b);
  return HermitianOperator(hx * pauli_x() - hz * pauli_z());
}

double subspace_gap_at_field(const TfimParams& p, const MomentumMode& k,
                             double g) {
  const double c = std::cos(k.k * p.b);
  return 4.0 * p.omega * std::sqrt(g * g - 2.0 * g * c + 1.0);
}

double subspace_gap(const TfimParams& p, const MomentumMode& k, double t) {
  return subspace_gap_at_field(p, k, p.schedule.value(t));
}

double approximate_lowest_gap_at_field(const TfimParams& p, double g) {
  return 4.0 * p.omega * std::abs(g - 1.0);
}

kzm::ImpulseWindow impulse_window(const TfimParams& p) {
  if (p.schedule.g0 >= 1.0) {
    throw std::invalid_argument(
        "tfim::impulse_window: requires g0 < 1 (approach from below)");
  }
  const double tq = p.schedule.tau_q;
  double hw = std::sqrt(tq / (8.0 * p.omega * (1.0 - p.schedule.g0)));
  hw = std::min(hw, 0.5 * tq);
  return {0.5 * tq - hw, 0.5 * tq + hw};
}

HermitianOperator subspace_cd_field(const TfimParams& p, const MomentumMode& k,
                                    double t) {
  const double g = p.schedule.value(t);
  const double c = std::cos(k.k * p.b);
  const double coeff = p.schedule.rate() * std::sin(k.k * p.b) /
                       (2.0 * (g * g - 2.0 * g * c + 1.0));
  return HermitianOperator(coeff * pauli_y());
}

double subspace_cd_norm(const TfimParams& p, const MomentumMode& k, double t) {
  const double g = p.schedule.value(t);
  const double c = std::cos(k.k * p.b);
  return std::sqrt(2.0) * std::abs(p.schedule.rate()) * std::sin(k.k * p.b) /
         (2.0 * (g * g - 2.0 * g * c + 1.0));
}

StateVector subspace_ground_state(const TfimParams& p, const MomentumMode& k,
                                  double g) {
  const double th = mixing_angle(p, k, g);
  StateVector v(2);
  v << std::cos(th), std::sin(th);
  return v;
}

double lowest_mode_lz_estimate(const TfimParams& p) {
  const double gdot = p.schedule.rate();
  if (gdot == 0.0) {
    throw std::invalid_argument("lowest_mode_lz_estimate: ramp rate is zero");
  }
  const double s = std::sin(M_PI / p.n);
  return 1.0 - std::exp(-2.0 * M_PI * p.omega / std::abs(gdot) * s * s);
}

ComplexMatrix pauli_string_matrix(const PauliString& s) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (char c : s.labels) {
    out = kron(out, single_site(c));
  }
  return s.coeff * out;
}

ComplexMatrix parity_operator(int n) {
  check_dense_size(n);
  return pauli_string_matrix({1.0, std::string(n, 'X')});
}

HermitianOperator spin_hamiltonian(const TfimParams& p, double t) {
  check_dense_size(p.n);
  const double g = p.schedule.value(t);
  const Eigen::Index dim = Eigen::Index{1} << p.n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < p.n; ++i) {
    std::string x(p.n, 'I');
    x[i] = 'X';
    h += pauli_string_matrix({-p.omega * g, x});
    std::string zz(p.n, 'I');
    zz[i] = 'Z';
    zz[(i + 1) % p.n] = 'Z';
    h += pauli_string_matrix({-p.omega, zz});
  }
  return HermitianOperator(std::move(h));
}

double u_coefficient(int m, double g, int n) {
  if (m < 1 || m > n / 2) {
    throw std::invalid_argument("u_coefficient: requires 1 <= m <= N/2");
  }
  if (g < 0.0) {
    throw std::invalid_argument("u_coefficient: requires g >= 0");
  }
  if (g == 0.0) {
    return m == 1 ? 0.125 : 0.0;
  }
  const double gn = std::pow(g, n);
  return (std::pow(g, 2 * m) + gn) /
         (8.0 * std::pow(g, m + 1) * (1.0 + gn));
}

std::vector<PauliString> cd_range_strings(int n, int m) {
  std::vector<PauliString> strings;
  strings.reserve(2 * n);
  for (int site = 0; site < n; ++site) {
    for (int swap = 0; swap < 2; ++swap) {
      std::string lab(n, 'I');
      lab[site] = swap ? 'Y' : 'Z';
      lab[(site + m) % n] = swap ? 'Z' : 'Y';
      for (int j = site + 1; j < site + m; ++j) {
        lab[j % n] = 'X';
      }
      strings.push_back({1.0, std::move(lab)});
    }
  }
  return strings;
}

HermitianOperator truncated_cd_field(const TfimParams& p, int truncation,
                                     double t) {
  check_dense_size(p.n);
  if (truncation < 1 || truncation > p.n / 2) {
    throw std::invalid_argument(
        "truncated_cd_field: requires 1 <= M <= N/2");
  }
  const double g = p.schedule.value(t);
  const double gdot = p.schedule.rate();
  const Eigen::Index dim = Eigen::Index{1} << p.n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int m = 1; m <= truncation; ++m) {
    const double weight = (m == p.n / 2) ? 0.5 : 1.0;
    const double scale = gdot * weight * u_coefficient(m, g, p.n);
    if (scale == 0.0) continue;
    for (const auto& s : cd_range_strings(p.n, m)) {
      h += scale * pauli_string_matrix(s);
    }
  }
  return HermitianOperator(std::move(h));
}

double phi_integral(double g) {
  if (g < 0.0) {
    throw std::invalid_argument("phi_integral: requires g >= 0");
  }
  return integrate(
      [g](double x) { return std::atan2(g - std::cos(x), std::sin(x)); }, 0.0,
      M_PI);
}

namespace {

// arctan[(g - cos kb)/sin kb] primitive appearing in the cost sums.
double arctan_term(double g, double kb) {
  return std::atan2(g - std::cos(kb), std::sin(kb));
}

}  // namespace

double cost_momentum_sum(const TfimParams& p) {
  const double g0 = p.schedule.g0;
  const double g1 = p.schedule.final_value();
  double sum = 0.0;
  for (const auto& mode : momentum_modes(p)) {
    sum += arctan_term(g1, mode.k * p.b) - arctan_term(g0, mode.k * p.b);
  }
  return sum / (std::sqrt(2.0) * p.schedule.tau_q);
}

std::pair<double, double> savings_momentum_sum(const TfimParams& p,
                                               const kzm::ImpulseWindow& w) {
  const double g0 = p.schedule.g0;
  const double g1 = p.schedule.final_value();
  const double gm = p.schedule.value(w.t_minus);
  const double gp = p.schedule.value(w.t_plus);
  double de = 0.0;
  for (const auto& mode : momentum_modes(p)) {
    const double kb = mode.k * p.b;
    de += (arctan_term(gm, kb) - arctan_term(g0, kb)) +
          (arctan_term(g1, kb) - arctan_term(gp, kb));
  }
  de /= std::sqrt(2.0) * p.schedule.tau_q;
  return {de, de / cost_momentum_sum(p)};
}

std::pair<double, double> savings_thermodynamic(const TfimParams& p,
                                                const kzm::ImpulseWindow& w) {
  const double phi0 = phi_integral(p.schedule.g0);
  const double phi1 = phi_integral(p.schedule.final_value());
  const double phim = phi_integral(p.schedule.value(w.t_minus));
  const double phip = phi_integral(p.schedule.value(w.t_plus));
  const double de = p.n / (2.0 * std::sqrt(2.0) * M_PI * p.schedule.tau_q) *
                    (phi1 - phip + phim - phi0);
  const double ratio = 1.0 - (phip - phim) / (phi1 - phi0);
  return {de, ratio};
}

}  // namespace cdkz::tfim
