#pragma once

#include <memory>
#include <vector>

#include "snw/frames.hpp"
#include "snw/io.hpp"
#include "snw/matcore.hpp"

namespace snw {

enum class MapKind { Sic, Mub, Reduction };

const char* to_string(MapKind kind);

/// h = sqrt((d^4 + d^3) / ((kd - 1)(kd + k - 2))).
double sic_map_constant(int d, int k);
/// h_s = sqrt(1 / ((dk - 1)(Lk - L + d - 1))).
double mub_map_constant(int d, int k, int num_bases);

/// Rotation for the SIC map: a d^2 x d^2 orthogonal matrix fixing (1,...,1).
RealMatrix sic_rotation(int d, RngSeed seed);
/// One d x d rotation per basis; seed 0 gives identities.
std::vector<RealMatrix> mub_rotations(int d, int num_bases, RngSeed seed);

/// Linear Hermiticity-preserving map on d x d matrices built from a SIC-POVM,
/// a MUB collection, or the reduction family X -> Tr(X) I - p X.
///
/// Immutable after construction. The frame is shared between copies. The
/// d^2 x d^2 superoperator (row-major vectorization) is materialized once and
/// used by apply_extended.
class KPositiveMap {
 public:
  MapKind kind() const { return kind_; }
  int d() const { return d_; }
  /// Positivity order.
  int k() const { return k_; }
  /// h (SIC), h_s (MUB), or p (reduction).
  double constant() const { return constant_; }
  const SicPovm* sic() const { return sic_.get(); }
  const MubCollection* mubs() const { return mubs_.get(); }
  const std::vector<RealMatrix>& rotations() const { return rotations_; }
  const ComplexMatrix& superoperator() const { return superop_; }

  friend KPositiveMap build_sic_map(int k, const SicPovm& sic, const RealMatrix& rotation);
  friend KPositiveMap build_sic_map(int k, std::shared_ptr<const SicPovm> sic, const RealMatrix& rotation);
  friend KPositiveMap build_mub_map(int k, const MubCollection& mubs, const std::vector<RealMatrix>& rotations);
  friend KPositiveMap build_mub_map(int k, std::shared_ptr<const MubCollection> mubs,
                                    const std::vector<RealMatrix>& rotations);
  friend KPositiveMap reduction_map(int d, double p);
  friend KPositiveMap adjoint_map(const KPositiveMap& map);
  friend ComplexMatrix apply_map(const KPositiveMap& map, const ComplexMatrix& x);

 private:
  KPositiveMap() = default;
  void materialize();

  MapKind kind_ = MapKind::Reduction;
  int d_ = 0;
  int k_ = 1;
  double constant_ = 0.0;
  std::shared_ptr<const SicPovm> sic_;
  std::shared_ptr<const MubCollection> mubs_;
  std::vector<RealMatrix> rotations_;
  ComplexMatrix superop_;
};

/// Lambda(X) = (I/d) Tr X - h Sum_{g,l} O_gl Tr[(X - (I/d) Tr X) P_l] P_g.
/// Throws InvalidArgument for k outside [1, d] and InvalidRotation when the
/// rotation is not d^2 x d^2 orthogonal fixing (1,...,1).
KPositiveMap build_sic_map(int k, const SicPovm& sic, const RealMatrix& rotation);
KPositiveMap build_sic_map(int k, std::shared_ptr<const SicPovm> sic, const RealMatrix& rotation);

/// Theta_k(X) = (I/d) Tr X - h_s Sum_alpha Sum_{g,l} O^alpha_gl Tr[(X - (I/d) Tr X) Q^alpha_l] Q^alpha_g.
KPositiveMap build_mub_map(int k, const MubCollection& mubs, const std::vector<RealMatrix>& rotations);
KPositiveMap build_mub_map(int k, std::shared_ptr<const MubCollection> mubs,
                           const std::vector<RealMatrix>& rotations);

/// X -> Tr(X) I - p X, 0 < p <= 1; k() is the largest k with p <= 1/k (capped at d).
KPositiveMap reduction_map(int d, double p);

ComplexMatrix apply_map(const KPositiveMap& map, const ComplexMatrix& x);

/// Hilbert-Schmidt adjoint: Tr(A^dagger Lambda(B)) = Tr(Lambda^dagger(A)^dagger B).
/// For the frame maps this is the same construction with transposed rotations.
KPositiveMap adjoint_map(const KPositiveMap& map);
ComplexMatrix adjoint_apply(const KPositiveMap& map, const ComplexMatrix& x);

/// (I (x) Lambda)(Sum_ij |ii><jj|), assembled from apply_map on matrix units.
HermitianOperator choi(const KPositiveMap& map);

/// (I (x) Lambda)(rho) for rho on the d (x) d space, acting blockwise on the second factor.
HermitianOperator apply_extended(const KPositiveMap& map, const ComplexMatrix& rho);
HermitianOperator apply_extended(const KPositiveMap& map, const DensityOperator& rho);

// {"kind", "d", "k", "constant", "rotations": [...], "frame": <frame file object>}
Json map_to_json(const KPositiveMap& map);
KPositiveMap map_from_json(const Json& j);

}  // namespace snw
