#include "cdkz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cdkz {

namespace {

constexpr Complex kI{0.0, 1.0};

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

}  // namespace

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

HermitianOperator::HermitianOperator(ComplexMatrix mat, double rel_tol)
    : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols()) {
    throw ContractViolation("HermitianOperator: matrix is not square");
  }
  if (!all_finite(mat_)) {
    throw ContractViolation("HermitianOperator: non-finite entries");
  }
  const double scale = mat_.cwiseAbs().maxCoeff();
  const double dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > rel_tol * std::max(scale, 1e-300)) {
    throw ContractViolation("HermitianOperator: max|A - A^dag| = " +
                            std::to_string(dev) + " exceeds tolerance");
  }
}

std::vector<TimedState> propagate(const Generator& hamiltonian,
                                  const StateVector& psi0, double t_start,
                                  double t_end, int steps, int max_samples) {
  if (steps < 1) {
    throw PropagationError("propagate: steps must be >= 1");
  }
  if (!(t_end > t_start)) {
    throw PropagationError("propagate: requires t_end > t_start");
  }
  if (max_samples < 2) max_samples = 2;
  const double h = (t_end - t_start) / steps;
  const int stride = std::max(1, (steps + max_samples - 2) / (max_samples - 1));

  auto eval = [&](double t) {
    ComplexMatrix m = hamiltonian(t);
    if (!all_finite(m)) {
      throw PropagationError("propagate: non-finite generator at t = " +
                             std::to_string(t));
    }
    return m;
  };

  std::vector<TimedState> out;
  out.reserve(static_cast<std::size_t>(steps / stride) + 2);
  out.push_back({t_start, psi0});

  StateVector psi = psi0;
  ComplexMatrix h_lo = eval(t_start);
  for (int i = 0; i < steps; ++i) {
    const double t = t_start + i * h;
    const ComplexMatrix h_mid = eval(t + 0.5 * h);
    const ComplexMatrix h_hi = eval(t + h);

    const StateVector k1 = -kI * (h_lo * psi);
    const StateVector k2 = -kI * (h_mid * (psi + (0.5 * h) * k1));
    const StateVector k3 = -kI * (h_mid * (psi + (0.5 * h) * k2));
    const StateVector k4 = -kI * (h_hi * (psi + h * k3));
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    h_lo = h_hi;

    if ((i + 1) % stride == 0 || i + 1 == steps) {
      out.push_back({i + 1 == steps ? t_end : t + h, psi});
    }
  }
  return out;
}

Eigensystem hermitian_eigensystem(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericsError("hermitian_eigensystem: solver failed");
  }
  Eigensystem sys{solver.eigenvalues(), solver.eigenvectors()};
  // Phase convention: largest-magnitude component real positive.
  for (Eigen::Index j = 0; j < sys.vectors.cols(); ++j) {
    Eigen::Index imax = 0;
    sys.vectors.col(j).cwiseAbs().maxCoeff(&imax);
    const Complex pivot = sys.vectors(imax, j);
    if (std::abs(pivot) > 0) {
      sys.vectors.col(j) *= std::conj(pivot) / std::abs(pivot);
    }
  }
  return sys;
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

namespace {

struct SimpsonPanel {
  double fa, fm, fb;
  double estimate(double a, double b) const {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }
};

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, const SimpsonPanel& p, double whole,
                        double tol, int depth, int min_depth) {
  if (depth > 60) {
    throw QuadratureError("integrate: tolerance not met at max depth");
  }
  const double m = 0.5 * (a + b);
  SimpsonPanel left{p.fa, f(0.5 * (a + m)), p.fm};
  SimpsonPanel right{p.fm, f(0.5 * (m + b)), p.fb};
  const double sl = left.estimate(a, m);
  const double sr = right.estimate(m, b);
  const double delta = sl + sr - whole;
  if (depth >= min_depth && std::abs(delta) <= 15.0 * tol) {
    return sl + sr + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, left, sl, 0.5 * tol, depth + 1, min_depth) +
         adaptive_simpson(f, m, b, right, sr, 0.5 * tol, depth + 1, min_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int min_depth) {
  if (!(a <= b)) {
    throw QuadratureError("integrate: requires a <= b");
  }
  if (a == b) return 0.0;
  SimpsonPanel p{f(a), f(0.5 * (a + b)), f(b)};
  const double s0 = p.estimate(a, b);
  // min_depth forces an initial subdivision so narrow features (steep
  // logistic switches) cannot be skipped by an accidentally smooth
  // coarse panel.
  const double tol = rel_tol * std::max(std::abs(s0), 1e-6);
  return adaptive_simpson(f, a, b, p, s0, tol, 0, min_depth);
}

double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    throw NumericsError("bisect_root: non-finite endpoint value");
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw RootBracketError("bisect_root: no sign change on bracket");
  }
  const double span = hi - lo;
  while (hi - lo > tol * span) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (!std::isfinite(fmid)) {
      throw NumericsError("bisect_root: non-finite value at " +
                          std::to_string(mid));
    }
    if (fmid == 0.0) return mid;
    if (flo * fmid < 0.0) {
      hi = mid;
      fhi = fmid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cdkz
