#pragma once

#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "snw/error.hpp"
#include "snw/rng.hpp"

namespace snw {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitianRel = 1e-12;  // max|M - M^dagger| relative to max|M_ij|
inline constexpr double kUnitNorm = 1e-12;
inline constexpr double kSlack = 1e-9;  // global verdict / PSD / state-validation slack
inline constexpr double kRotation = 1e-10;
}  // namespace tol

/// max |M - M^dagger| divided by the largest entry magnitude (0 for the zero matrix).
double hermiticity_defect(const ComplexMatrix& m);

class HermitianOperator {
 public:
  /// Rejects non-square or non-Hermitian input (ErrorCode::NotHermitian).
  explicit HermitianOperator(ComplexMatrix m);

  /// (m + m^dagger)/2 without validation; for operators we assembled ourselves.
  static HermitianOperator symmetrized(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

 private:
  struct Unchecked {};
  HermitianOperator(Unchecked, ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

class PureStateVector {
 public:
  /// Requires Euclidean norm within tol::kUnitNorm of 1.
  explicit PureStateVector(ComplexVector amplitudes);
  static PureStateVector normalized(const ComplexVector& v);
  /// Basis state |index> in dimension dim.
  static PureStateVector basis(Eigen::Index dim, Eigen::Index index);

  const ComplexVector& amplitudes() const { return v_; }
  Eigen::Index dim() const { return v_.size(); }
  ComplexMatrix projector() const { return v_ * v_.adjoint(); }

 private:
  ComplexVector v_;
};

/// Trace-one positive semidefinite operator.
class DensityOperator {
 public:
  /// Throws ErrorCode::ValidationFailed; detail() names the violated invariant.
  explicit DensityOperator(const ComplexMatrix& m, double tolerance = tol::kSlack);
  static DensityOperator from_pure(const PureStateVector& psi);

  /// Name of the first violated invariant ("shape", "finite", "hermiticity",
  /// "trace", "positivity"), or nullopt when m is a valid state.
  static std::optional<std::string> violated_invariant(const ComplexMatrix& m,
                                                       double tolerance = tol::kSlack);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double purity() const;
  HermitianOperator as_hermitian() const { return HermitianOperator::symmetrized(m_); }

 private:
  ComplexMatrix m_;
};

/// Local dimension d of a d*d bipartite space with total dimension n.
int bipartite_local_dim(Eigen::Index n);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
RealMatrix kron(const RealMatrix& a, const RealMatrix& b);

/// Eigenvalues ascending.
RealVector hermitian_spectrum(const HermitianOperator& h);
RealVector hermitian_spectrum(const ComplexMatrix& m);  // validates Hermiticity first

struct HermitianEigensystem {
  RealVector values;  // ascending
  ComplexMatrix vectors;
};
HermitianEigensystem hermitian_eigensystem(const HermitianOperator& h);

double min_eigenvalue(const HermitianOperator& h);

/// lambda_min >= -kSlack * max(1, ||H||_F).
bool is_psd(const HermitianOperator& h);

enum class Subsystem { A, B };

/// Composite index convention: i_A * dB + i_B.
ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep, int dA, int dB);

/// Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed by diag(R)).
ComplexMatrix haar_unitary(int d, RngSeed seed);

/// Orthogonal O with O * (1,...,1)^T = (1,...,1)^T. Seed 0 yields the identity.
RealMatrix random_orthogonal_fixing_ones(int n, RngSeed seed);

/// max(||O^T O - I||_max, ||O 1 - 1||_max).
double rotation_defect(const RealMatrix& o);

/// Singular values of the dA x dB coefficient matrix, descending; length min(dA, dB).
RealVector schmidt_coefficients(const PureStateVector& psi, int dA, int dB);

/// Sum_{ij} |ii><jj| (unnormalized).
ComplexMatrix max_entangled_kernel(int d);

/// |Phi><Phi| with |Phi> = Sum_i |ii> / sqrt(d).
DensityOperator max_entangled_state(int d);

ComplexMatrix identity(Eigen::Index n);

}  // namespace snw
