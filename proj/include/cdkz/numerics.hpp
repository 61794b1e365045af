#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

// Dense complex linear algebra, Schrodinger propagation, quadrature and
// root finding. Everything works in units of hbar = 1.

namespace cdkz {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PropagationError : NumericsError {
  using NumericsError::NumericsError;
};
struct QuadratureError : NumericsError {
  using NumericsError::NumericsError;
};
struct RootBracketError : NumericsError {
  using NumericsError::NumericsError;
};
struct ContractViolation : NumericsError {
  using NumericsError::NumericsError;
};

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Square complex matrix certified Hermitian at construction:
/// max|A - A^dag| <= rel_tol * max|A|.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix mat, double rel_tol = 1e-12);

  const ComplexMatrix& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  ComplexMatrix mat_;
};

struct TimedState {
  double t;
  StateVector psi;
};

using Generator = std::function<ComplexMatrix(double)>;

/// Fixed-step classical RK4 for i dpsi/dt = H(t) psi. Returns states
/// sampled uniformly (endpoints always included, at most max_samples
/// points). States are never renormalized; norm drift is the caller's
/// integrator-quality diagnostic.
std::vector<TimedState> propagate(const Generator& hamiltonian,
                                  const StateVector& psi0, double t_start,
                                  double t_end, int steps,
                                  int max_samples = 1001);

struct Eigensystem {
  Eigen::VectorXd values;   // ascending
  ComplexMatrix vectors;    // orthonormal columns, phase-fixed
};

/// Eigendecomposition of a Hermitian operator. Each eigenvector's
/// largest-magnitude component is made real and positive so repeated
/// calls give identical vectors.
Eigensystem hermitian_eigensystem(const HermitianOperator& a);

double frobenius_norm(const ComplexMatrix& a);

/// Adaptive composite Simpson quadrature with interval bisection.
/// min_depth forces 2^min_depth initial panels so that narrow features
/// are not missed; use a small value for smooth but expensive integrands.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-9, int min_depth = 12);

/// Bisection; requires a sign change on [lo, hi]. tol is relative to the
/// initial bracket span.
double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol = 1e-12);

}  // namespace cdkz
