#include "snw/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace snw {

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const double scale = m.cwiseAbs().maxCoeff();
  if (m.size() == 0 || scale == 0.0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw Error(ErrorCode::NotHermitian, "operator is not square");
  }
  if (!m_.allFinite()) throw Error(ErrorCode::NotHermitian, "operator has non-finite entries");
  if (hermiticity_defect(m_) > tol::kHermitianRel) {
    throw Error(ErrorCode::NotHermitian, "operator is not Hermitian");
  }
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotHermitian, "operator is not square");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  return HermitianOperator(Unchecked{}, std::move(h));
}

PureStateVector::PureStateVector(ComplexVector amplitudes) : v_(std::move(amplitudes)) {
  if (v_.size() == 0 || !v_.allFinite() || std::abs(v_.norm() - 1.0) > tol::kUnitNorm) {
    throw Error(ErrorCode::InvalidArgument, "state vector is not normalized");
  }
}

PureStateVector PureStateVector::normalized(const ComplexVector& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero vector");
  return PureStateVector(v / n);
}

PureStateVector PureStateVector::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return PureStateVector(std::move(v));
}

std::optional<std::string> DensityOperator::violated_invariant(const ComplexMatrix& m,
                                                               double tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) return "shape";
  if (!m.allFinite()) return "finite";
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tolerance) return "hermiticity";
  if (std::abs(m.trace().real() - 1.0) > tolerance || std::abs(m.trace().imag()) > tolerance) {
    return "trace";
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -tolerance) return "positivity";
  return std::nullopt;
}

DensityOperator::DensityOperator(const ComplexMatrix& m, double tolerance) {
  if (auto bad = violated_invariant(m, tolerance)) {
    throw Error(ErrorCode::ValidationFailed, "density operator violates invariant: " + *bad, *bad);
  }
  m_ = 0.5 * (m + m.adjoint());
}

DensityOperator DensityOperator::from_pure(const PureStateVector& psi) {
  return DensityOperator(psi.projector());
}

double DensityOperator::purity() const {
  return (m_ * m_).trace().real();
}

int bipartite_local_dim(Eigen::Index n) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d < 1 || d * d != n) {
    throw Error(ErrorCode::DimensionMismatch, "dimension " + std::to_string(n) + " is not a square");
  }
  return static_cast<int>(d);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

RealVector hermitian_spectrum(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

RealVector hermitian_spectrum(const ComplexMatrix& m) {
  return hermitian_spectrum(HermitianOperator(m));
}

HermitianEigensystem hermitian_eigensystem(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const HermitianOperator& h) {
  return hermitian_spectrum(h)(0);
}

bool is_psd(const HermitianOperator& h) {
  return min_eigenvalue(h) >= -tol::kSlack * std::max(1.0, h.matrix().norm());
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep, int dA, int dB) {
  if (dA < 1 || dB < 1 || m.rows() != m.cols() || m.rows() != Eigen::Index(dA) * dB) {
    throw Error(ErrorCode::DimensionMismatch, "partial_trace: matrix side must equal dA*dB");
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dA, dA);
    for (int i = 0; i < dA; ++i)
      for (int j = 0; j < dA; ++j)
        for (int b = 0; b < dB; ++b) out(i, j) += m(i * dB + b, j * dB + b);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dB, dB);
  for (int a = 0; a < dA; ++a) out += m.block(a * dB, a * dB, dB, dB);
  return out;
}

ComplexMatrix haar_unitary(int d, RngSeed seed) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "haar_unitary: d must be >= 1");
  CounterRng rng(seed);
  ComplexMatrix g(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

RealMatrix random_orthogonal_fixing_ones(int n, RngSeed seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "random_orthogonal_fixing_ones: n must be >= 1");
  if (seed.value == 0 || n == 1) return RealMatrix::Identity(n, n);

  CounterRng rng(seed);
  const int m = n - 1;
  RealMatrix g(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix block = qr.householderQ();
  const RealMatrix& r = qr.matrixQR();
  for (int j = 0; j < m; ++j) {
    if (r(j, j) < 0.0) block.col(j) *= -1.0;
  }

  RealMatrix embedded = RealMatrix::Identity(n, n);
  embedded.bottomRightCorner(m, m) = block;

  // Reflection H with H e_0 = u, u = (1,...,1)/sqrt(n); H is symmetric and involutive.
  RealVector u = RealVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  RealVector v = RealVector::Unit(n, 0) - u;
  RealMatrix h = RealMatrix::Identity(n, n) - 2.0 * v * v.transpose() / v.squaredNorm();
  return h * embedded * h;
}

double rotation_defect(const RealMatrix& o) {
  if (o.rows() != o.cols() || o.size() == 0) return std::numeric_limits<double>::infinity();
  const auto n = o.rows();
  const double ortho = (o.transpose() * o - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  const double axis = (o * RealVector::Ones(n) - RealVector::Ones(n)).cwiseAbs().maxCoeff();
  return std::max(ortho, axis);
}

RealVector schmidt_coefficients(const PureStateVector& psi, int dA, int dB) {
  if (dA < 1 || dB < 1 || psi.dim() != Eigen::Index(dA) * dB) {
    throw Error(ErrorCode::DimensionMismatch, "schmidt_coefficients: vector length must equal dA*dB");
  }
  ComplexMatrix c(dA, dB);
  for (int a = 0; a < dA; ++a)
    for (int b = 0; b < dB; ++b) c(a, b) = psi.amplitudes()(a * dB + b);
  Eigen::JacobiSVD<ComplexMatrix> svd(c);
  return svd.singularValues();
}

ComplexMatrix max_entangled_kernel(int d) {
  ComplexMatrix k = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) k(i * d + i, j * d + j) = 1.0;
  return k;
}

DensityOperator max_entangled_state(int d) {
  return DensityOperator(max_entangled_kernel(d) / static_cast<double>(d));
}

ComplexMatrix identity(Eigen::Index n) {
  return ComplexMatrix::Identity(n, n);
}

}  // namespace snw
