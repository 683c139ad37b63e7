#include "snw/frames.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

namespace snw {
namespace {

cplx root_of_unity(int d, long long power) {
  const long long p = ((power % d) + d) % d;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) / d;
  return {std::cos(angle), std::sin(angle)};
}

// (X^a Z^b phi)_j = omega^{b (j - a)} phi_{j - a}
ComplexVector apply_wh(const ComplexVector& phi, int a, int b) {
  const int d = static_cast<int>(phi.size());
  ComplexVector out(d);
  for (int j = 0; j < d; ++j) {
    const int src = ((j - a) % d + d) % d;
    out(j) = root_of_unity(d, static_cast<long long>(b) * src) * phi(src);
  }
  return out;
}

// (D^dagger phi) for D = X^a Z^b: D^dagger = Z^{-b} X^{-a}
ComplexVector apply_wh_adjoint(const ComplexVector& phi, int a, int b) {
  const int d = static_cast<int>(phi.size());
  ComplexVector out(d);
  for (int j = 0; j < d; ++j) {
    const int src = (j + a) % d;
    out(j) = root_of_unity(d, -static_cast<long long>(b) * j) * phi(src);
  }
  return out;
}

// Scale-invariant potential of x in R^{2d} (phi = re + i im) and its gradient.
double potential_and_gradient(const RealVector& x, RealVector& grad) {
  const int d = static_cast<int>(x.size() / 2);
  ComplexVector phi(d);
  for (int j = 0; j < d; ++j) phi(j) = cplx(x(j), x(d + j));
  const double n = phi.squaredNorm();
  double g = 0.0;
  ComplexVector dg = ComplexVector::Zero(d);  // dG / d conj(phi)
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (a == 0 && b == 0) continue;
      const ComplexVector dphi = apply_wh(phi, a, b);
      const cplx c = phi.dot(dphi);  // <phi|D|phi>
      const double c2 = std::norm(c);
      g += c2 * c2;
      dg += 2.0 * c2 * (std::conj(c) * dphi + c * apply_wh_adjoint(phi, a, b));
    }
  }
  const double n4 = n * n * n * n;
  const double f = g / n4;
  const ComplexVector wirt = dg / n4 - 4.0 * f * phi / n;
  grad.resize(2 * d);
  for (int j = 0; j < d; ++j) {
    grad(j) = 2.0 * wirt(j).real();
    grad(d + j) = 2.0 * wirt(j).imag();
  }
  return f;
}

RealVector lbfgs_minimize(RealVector x, int max_iter) {
  constexpr int kMemory = 8;
  std::deque<std::pair<RealVector, RealVector>> history;  // (s, y)
  RealVector grad;
  double f = potential_and_gradient(x, grad);
  for (int iter = 0; iter < max_iter; ++iter) {
    if (grad.norm() < 1e-12 * std::max(1.0, x.norm())) break;

    // two-loop recursion
    RealVector q = grad;
    std::vector<double> alpha(history.size());
    for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
      const auto& [s, y] = history[i];
      alpha[i] = s.dot(q) / y.dot(s);
      q -= alpha[i] * y;
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      q *= s.dot(y) / y.squaredNorm();
    } else {
      q *= 1e-2 / std::max(grad.norm(), 1e-300);
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
      const auto& [s, y] = history[i];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[i] - beta) * s;
    }
    RealVector dir = -q;
    double slope = grad.dot(dir);
    if (slope >= 0.0) {
      dir = -grad;
      slope = -grad.squaredNorm();
      history.clear();
    }

    double step = 1.0;
    RealVector x_new;
    RealVector grad_new;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + step * dir;
      f_new = potential_and_gradient(x_new, grad_new);
      if (f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    RealVector s = x_new - x;
    RealVector y = grad_new - grad;
    if (y.dot(s) > 1e-18) {
      history.emplace_back(std::move(s), std::move(y));
      if (history.size() > kMemory) history.pop_front();
    }
    // keep the iterate on the unit sphere; the potential is scale invariant
    const double nrm = x_new.norm();
    const bool rescale = std::abs(nrm - 1.0) > 1e-3;
    x = x_new;
    grad = grad_new;
    f = f_new;
    if (rescale) {
      x /= nrm;
      grad *= nrm;
      history.clear();
    }
  }
  return x / x.norm();
}

// Gauss-Newton on r_ab = |<phi|D_ab|phi>|^2 / n^2 - 1/(d+1).
ComplexVector polish_overlaps(ComplexVector phi, int max_iter) {
  const int d = static_cast<int>(phi.size());
  const double target = 1.0 / (d + 1);
  const int m = d * d - 1;
  for (int iter = 0; iter < max_iter; ++iter) {
    phi /= phi.norm();
    RealVector r(m);
    RealMatrix jac(m, 2 * d);
    int row = 0;
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (a == 0 && b == 0) continue;
        const ComplexVector dphi = apply_wh(phi, a, b);
        const cplx c = phi.dot(dphi);
        const double c2 = std::norm(c);
        r(row) = c2 - target;
        // n = 1 at the current point
        const ComplexVector wirt =
            std::conj(c) * dphi + c * apply_wh_adjoint(phi, a, b) - 2.0 * c2 * phi;
        for (int j = 0; j < d; ++j) {
          jac(row, j) = 2.0 * wirt(j).real();
          jac(row, d + j) = 2.0 * wirt(j).imag();
        }
        ++row;
      }
    }
    if (r.cwiseAbs().maxCoeff() < 1e-15) break;
    const RealVector delta = jac.completeOrthogonalDecomposition().solve(-r);
    if (!delta.allFinite()) break;
    for (int j = 0; j < d; ++j) phi(j) += cplx(delta(j), delta(d + j));
    if (delta.norm() < 1e-16) break;
  }
  return phi / phi.norm();
}

}  // namespace

ComplexMatrix weyl_heisenberg(int d, int a, int b) {
  ComplexMatrix out(d, d);
  for (int j = 0; j < d; ++j) out.col(j) = apply_wh(PureStateVector::basis(d, j).amplitudes(), a, b);
  return out;
}

double wh_overlap_residual(const ComplexVector& fiducial) {
  const int d = static_cast<int>(fiducial.size());
  const ComplexVector phi = fiducial / fiducial.norm();
  double worst = 0.0;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (a == 0 && b == 0) continue;
      const double c2 = std::norm(phi.dot(apply_wh(phi, a, b)));
      worst = std::max(worst, std::abs(c2 - 1.0 / (d + 1)));
    }
  }
  return worst;
}

double wh_frame_potential(const ComplexVector& fiducial) {
  RealVector x(2 * fiducial.size());
  for (Eigen::Index j = 0; j < fiducial.size(); ++j) {
    x(j) = fiducial(j).real();
    x(fiducial.size() + j) = fiducial(j).imag();
  }
  RealVector grad;
  return potential_and_gradient(x, grad);
}

SicPovm sic_from_vectors(std::vector<ComplexVector> vectors) {
  if (vectors.empty()) throw Error(ErrorCode::InvalidArgument, "SIC needs at least one vector");
  const int d = static_cast<int>(vectors.front().size());
  if (vectors.size() != static_cast<std::size_t>(d) * d) {
    throw Error(ErrorCode::OverlapViolation, "SIC must have d^2 vectors");
  }
  SicPovm sic;
  sic.d = d;
  for (auto& v : vectors) {
    if (v.size() != d) throw Error(ErrorCode::DimensionMismatch, "SIC vectors differ in length");
    if (std::abs(v.norm() - 1.0) > tol::kUnitNorm * 100) {
      throw Error(ErrorCode::OverlapViolation, "SIC vector is not normalized");
    }
    sic.effects.push_back(v * v.adjoint() / static_cast<double>(d));
  }
  sic.vectors = std::move(vectors);

  const double target = 1.0 / (d + 1);
  double worst = 0.0;
  for (std::size_t j = 0; j < sic.vectors.size(); ++j)
    for (std::size_t k = j + 1; k < sic.vectors.size(); ++k)
      worst = std::max(worst, std::abs(std::norm(sic.vectors[j].dot(sic.vectors[k])) - target));
  if (d > 1 && worst > frame_tol::kOverlap) {
    throw Error(ErrorCode::OverlapViolation, "vectors are not SIC: worst overlap deviation " +
                                                 std::to_string(worst), {}, worst);
  }
  const auto diag = verify_frames(sic, frame_tol::kOverlap);
  if (diag.check("completeness").deviation > frame_tol::kCompleteness ||
      diag.check("effect_trace").deviation > frame_tol::kEffectTrace) {
    throw Error(ErrorCode::OverlapViolation, "SIC effects do not form a POVM");
  }
  return sic;
}

SicPovm wh_sic_from_fiducial(const PureStateVector& fiducial) {
  const int d = static_cast<int>(fiducial.dim());
  std::vector<ComplexVector> vectors;
  vectors.reserve(static_cast<std::size_t>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) vectors.push_back(apply_wh(fiducial.amplitudes(), a, b));
  SicPovm sic = sic_from_vectors(std::move(vectors));
  sic.fiducial = fiducial;
  return sic;
}

PureStateVector find_sic_fiducial(int d, RngSeed seed, int restarts) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "find_sic_fiducial: d must be >= 2");
  if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "find_sic_fiducial: restarts must be >= 1");
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    RealVector x(2 * d);
    for (int j = 0; j < 2 * d; ++j) x(j) = rng.normal();
    x = lbfgs_minimize(x / x.norm(), 4000);
    ComplexVector phi(d);
    for (int j = 0; j < d; ++j) phi(j) = cplx(x(j), x(d + j));
    phi = polish_overlaps(phi, 50);
    // fix the global phase so the first nonzero amplitude is real positive
    Eigen::Index lead = 0;
    phi.cwiseAbs().maxCoeff(&lead);
    phi *= std::abs(phi(lead)) / phi(lead);
    phi /= phi.norm();
    const double residual = wh_overlap_residual(phi);
    best = std::min(best, residual);
    if (residual <= frame_tol::kOverlap) {
      PureStateVector candidate = PureStateVector::normalized(phi);
      try {
        (void)wh_sic_from_fiducial(candidate);
        return candidate;
      } catch (const Error&) {
        continue;
      }
    }
  }
  throw Error(ErrorCode::SearchFailed,
              "SIC fiducial search failed in d=" + std::to_string(d) + " after " +
                  std::to_string(restarts) + " restarts; best residual " + std::to_string(best),
              {}, best);
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

MubCollection MubCollection::subset(const std::vector<int>& which) const {
  MubCollection out;
  out.d = d;
  for (int idx : which) {
    if (idx < 0 || idx >= size()) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
    out.bases.push_back(bases[idx]);
    out.projectors.push_back(projectors[idx]);
  }
  return out;
}

MubCollection mub_from_bases(std::vector<ComplexMatrix> bases) {
  if (bases.empty()) throw Error(ErrorCode::InvalidArgument, "MUB collection needs at least one basis");
  MubCollection mubs;
  mubs.d = static_cast<int>(bases.front().rows());
  for (const auto& b : bases) {
    if (b.rows() != mubs.d || b.cols() != mubs.d) {
      throw Error(ErrorCode::DimensionMismatch, "MUB bases must be d x d");
    }
    std::vector<ComplexMatrix> proj;
    for (int i = 0; i < mubs.d; ++i) proj.push_back(b.col(i) * b.col(i).adjoint());
    mubs.projectors.push_back(std::move(proj));
  }
  mubs.bases = std::move(bases);
  const auto diag = verify_frames(mubs, frame_tol::kOverlap);
  if (diag.check("orthonormality").deviation > frame_tol::kOrthonormal ||
      diag.check("unbiasedness").deviation > frame_tol::kOverlap ||
      diag.check("basis_count").deviation > 0.0) {
    throw Error(ErrorCode::OverlapViolation, "bases are not mutually unbiased");
  }
  return mubs;
}

MubCollection mub_prime(int d) {
  if (!is_prime(d)) throw Error(ErrorCode::NotPrime, "mub_prime: " + std::to_string(d) + " is not prime");
  std::vector<ComplexMatrix> bases;
  bases.push_back(ComplexMatrix::Identity(d, d));
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  if (d == 2) {
    ComplexMatrix x(2, 2);
    x << s, s, s, -s;
    ComplexMatrix y(2, 2);
    y << s, s, cplx(0, s), cplx(0, -s);
    bases.push_back(x);
    bases.push_back(y);
  } else {
    for (int alpha = 0; alpha < d; ++alpha) {
      ComplexMatrix b(d, d);
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          b(k, j) = s * root_of_unity(d, static_cast<long long>(alpha) * k * k + static_cast<long long>(j) * k);
      bases.push_back(std::move(b));
    }
  }
  return mub_from_bases(std::move(bases));
}

const FrameCheck& FrameDiagnostics::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error(ErrorCode::InvalidArgument, "no frame check named " + name);
}

FrameDiagnostics verify_frames(const SicPovm& sic, double tolerance) {
  FrameDiagnostics diag;
  diag.kind = "sic";
  diag.d = sic.d;
  diag.count = static_cast<int>(sic.effects.size());
  diag.tolerance = tolerance;
  const int d = sic.d;

  const double count_dev = std::abs(static_cast<double>(sic.effects.size()) - double(d) * d);
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  double trace_dev = 0.0;
  for (const auto& p : sic.effects) {
    sum += p;
    trace_dev = std::max(trace_dev, std::abs(p.trace() - cplx(1.0 / d, 0.0)));
  }
  const double completeness = (sum - ComplexMatrix::Identity(d, d)).norm();
  double overlap_dev = 0.0;
  const double target = 1.0 / (d + 1);
  for (std::size_t j = 0; j < sic.effects.size(); ++j) {
    for (std::size_t k = j + 1; k < sic.effects.size(); ++k) {
      const double ov = double(d) * d * (sic.effects[j] * sic.effects[k]).trace().real();
      overlap_dev = std::max(overlap_dev, std::abs(ov - target));
    }
  }
  diag.checks = {
      {"count", count_dev, count_dev == 0.0},
      {"completeness", completeness, completeness <= tolerance},
      {"effect_trace", trace_dev, trace_dev <= tolerance},
      {"overlap", overlap_dev, overlap_dev <= tolerance},
  };
  diag.passed = std::all_of(diag.checks.begin(), diag.checks.end(), [](const auto& c) { return c.passed; });
  return diag;
}

FrameDiagnostics verify_frames(const MubCollection& mubs, double tolerance) {
  FrameDiagnostics diag;
  diag.kind = "mub";
  diag.d = mubs.d;
  diag.count = mubs.size();
  diag.tolerance = tolerance;
  const int d = mubs.d;

  double ortho = 0.0;
  for (const auto& b : mubs.bases) {
    ortho = std::max(ortho, (b.adjoint() * b - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  double unbiased = 0.0;
  for (int m = 0; m < mubs.size(); ++m) {
    for (int n = m + 1; n < mubs.size(); ++n) {
      const ComplexMatrix g = mubs.bases[m].adjoint() * mubs.bases[n];
      unbiased = std::max(unbiased, (g.cwiseAbs2().array() - 1.0 / d).abs().maxCoeff());
    }
  }
  const double count_dev = std::max(0.0, static_cast<double>(mubs.size() - (d + 1)));
  diag.checks = {
      {"basis_count", count_dev, count_dev == 0.0},
      {"orthonormality", ortho, ortho <= tolerance},
      {"unbiasedness", unbiased, unbiased <= tolerance},
  };
  diag.passed = std::all_of(diag.checks.begin(), diag.checks.end(), [](const auto& c) { return c.passed; });
  return diag;
}

FrameIdentity sic_purity_identity(const DensityOperator& rho, const SicPovm& sic) {
  if (rho.dim() != sic.d) throw Error(ErrorCode::DimensionMismatch, "state and SIC dimensions differ");
  const double d = sic.d;
  double lhs = 0.0;
  for (const auto& p : sic.effects) lhs += std::norm((p * rho.matrix()).trace());
  return {lhs, (rho.purity() + 1.0) / (d + d * d)};
}

FrameIdentity mub_purity_bound(const DensityOperator& rho, const MubCollection& mubs) {
  if (rho.dim() != mubs.d) throw Error(ErrorCode::DimensionMismatch, "state and MUB dimensions differ");
  double lhs = 0.0;
  for (const auto& basis : mubs.projectors)
    for (const auto& q : basis) lhs += std::norm((rho.matrix() * q).trace());
  return {lhs, rho.purity() + static_cast<double>(mubs.size() - 1) / mubs.d};
}

namespace {
void check_offdiag_indices(int d, int i, int j) {
  if (i < 0 || j < 0 || i >= d || j >= d) throw Error(ErrorCode::InvalidArgument, "index out of range");
  if (i == j) throw Error(ErrorCode::InvalidArgument, "off-diagonal frame sum needs i != j");
}
}  // namespace

double offdiag_frame_sums(const SicPovm& sic, int i, int j) {
  check_offdiag_indices(sic.d, i, j);
  double sum = 0.0;
  // Tr(P |i><j|) = <j|P|i>
  for (const auto& p : sic.effects) sum += std::norm(p(j, i));
  return sum;
}

double offdiag_frame_sums(const MubCollection& mubs, int i, int j) {
  check_offdiag_indices(mubs.d, i, j);
  double sum = 0.0;
  for (const auto& basis : mubs.projectors)
    for (const auto& q : basis) sum += std::norm(q(j, i));
  return sum;
}

}  // namespace snw
