#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snw/matcore.hpp"

namespace snw {

/// d^2 subnormalized rank-one effects P_i = |phi_i><phi_i| / d with
/// |<phi_j|phi_k>|^2 = 1/(d+1) for j != k.
struct SicPovm {
  int d = 0;
  std::vector<ComplexVector> vectors;  // |phi_i>, unit norm
  std::vector<ComplexMatrix> effects;  // |phi_i><phi_i| / d
  std::optional<PureStateVector> fiducial;

  std::size_t size() const { return effects.size(); }
};

/// L orthonormal bases of C^d, pairwise mutually unbiased.
struct MubCollection {
  int d = 0;
  std::vector<ComplexMatrix> bases;                    // basis vectors are columns
  std::vector<std::vector<ComplexMatrix>> projectors;  // projectors[alpha][i] = |e_i^alpha><e_i^alpha|

  int size() const { return static_cast<int>(bases.size()); }
  bool complete() const { return size() == d + 1; }
  /// Sub-collection with the listed bases, in the given order.
  MubCollection subset(const std::vector<int>& which) const;
};

namespace frame_tol {
inline constexpr double kCompleteness = 1e-9;
inline constexpr double kEffectTrace = 1e-10;
inline constexpr double kOverlap = 1e-8;
inline constexpr double kOrthonormal = 1e-10;
}  // namespace frame_tol

/// X^a Z^b with X|j> = |j+1 mod d>, Z|j> = omega^j |j>.
ComplexMatrix weyl_heisenberg(int d, int a, int b);

/// Builds a SIC from explicit unit vectors; throws OverlapViolation when the
/// SicPovm invariants fail.
SicPovm sic_from_vectors(std::vector<ComplexVector> vectors);

/// Weyl-Heisenberg orbit of the fiducial; throws OverlapViolation when the
/// fiducial is not SIC.
SicPovm wh_sic_from_fiducial(const PureStateVector& fiducial);

/// Largest | |<phi|D_ab|phi>|^2 - 1/(d+1) | over (a,b) != (0,0).
double wh_overlap_residual(const ComplexVector& fiducial);

/// Weyl-Heisenberg frame potential Sum_{(a,b) != 0} |<phi|D_ab|phi>|^4 for unit phi.
/// Its minimum (d-1)/(d+1) is attained exactly by SIC fiducials.
double wh_frame_potential(const ComplexVector& fiducial);

inline constexpr int kDefaultSicRestarts = 64;

/// Multi-restart descent on the frame potential, polished by Gauss-Newton on
/// the overlap residuals. Throws SearchFailed (residual() = best residual)
/// when no restart verifies within frame_tol::kOverlap.
PureStateVector find_sic_fiducial(int d, RngSeed seed, int restarts = kDefaultSicRestarts);

bool is_prime(int n);

/// Complete set of d+1 MUBs for prime d; throws NotPrime otherwise.
MubCollection mub_prime(int d);

/// Builds a collection from explicit bases (columns); throws OverlapViolation
/// when the MubCollection invariants fail.
MubCollection mub_from_bases(std::vector<ComplexMatrix> bases);

struct FrameCheck {
  std::string name;
  double deviation = 0.0;
  bool passed = false;
};

struct FrameDiagnostics {
  std::string kind;  // "sic" or "mub"
  int d = 0;
  int count = 0;     // effects or bases
  double tolerance = 0.0;
  std::vector<FrameCheck> checks;
  bool passed = false;

  const FrameCheck& check(const std::string& name) const;
};

FrameDiagnostics verify_frames(const SicPovm& sic, double tolerance);
FrameDiagnostics verify_frames(const MubCollection& mubs, double tolerance);

struct FrameIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = Sum_j Tr(P_j rho)^2, rhs = (Tr rho^2 + 1)/(d + d^2). Equal for every SIC.
FrameIdentity sic_purity_identity(const DensityOperator& rho, const SicPovm& sic);

/// lhs = Sum_{alpha,i} Tr(rho Q_i^alpha)^2, rhs = Tr rho^2 + (L-1)/d. lhs <= rhs,
/// with equality for complete sets.
FrameIdentity mub_purity_bound(const DensityOperator& rho, const MubCollection& mubs);

/// Sum_l |Tr(P_l |i><j|)|^2 over the SIC effects (i != j).
double offdiag_frame_sums(const SicPovm& sic, int i, int j);
/// Sum_alpha Sum_l |Tr(Q_l^alpha |i><j|)|^2 (i != j).
double offdiag_frame_sums(const MubCollection& mubs, int i, int j);

}  // namespace snw
