#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "snw/kmaps.hpp"

namespace snw {

/// Schmidt-number witness: Tr(W sigma) >= 0 on every sigma with SN(sigma) <= k,
/// so a negative value certifies SN >= k + 1.
struct WitnessOperator {
  int d = 0;
  int k = 0;
  MapKind kind = MapKind::Sic;
  HermitianOperator matrix;
  double constant = 0.0;  // h or h_s
  int frame_size = 0;     // d^2 effects (SIC) or L bases (MUB)
  std::optional<RngSeed> rotation_seed;
  std::vector<RealMatrix> rotations;
  std::shared_ptr<const SicPovm> sic;
  std::shared_ptr<const MubCollection> mubs;
};

/// W = ((h + d)/d^2) I (x) I - h Sum_{g,l} O_gl conj(P_l) (x) P_g.
WitnessOperator sic_witness(int k, std::shared_ptr<const SicPovm> sic, const RealMatrix& rotation);
WitnessOperator sic_witness(int k, std::shared_ptr<const SicPovm> sic, RngSeed rotation_seed);
WitnessOperator sic_witness(int k, const SicPovm& sic, const RealMatrix& rotation);

/// W = ((1 + L h_s)/d) I (x) I - h_s Sum_alpha Sum_{g,l} O^alpha_gl conj(Q^alpha_l) (x) Q^alpha_g.
WitnessOperator mub_witness(int k, std::shared_ptr<const MubCollection> mubs,
                            const std::vector<RealMatrix>& rotations);
WitnessOperator mub_witness(int k, std::shared_ptr<const MubCollection> mubs, RngSeed rotation_seed);
WitnessOperator mub_witness(int k, const MubCollection& mubs, const std::vector<RealMatrix>& rotations);

/// The k-positive map whose Choi matrix is this witness.
KPositiveMap witness_map(const WitnessOperator& w);

/// Tr(W rho).
double evaluate(const WitnessOperator& w, const DensityOperator& rho);
double evaluate(const WitnessOperator& w, const ComplexMatrix& rho);

/// b = sqrt(Tr(W^dagger W) - (Tr W)^2 / d^2), evaluated numerically. MUB kind only.
double witness_b_constant(const WitnessOperator& w);
/// h_s sqrt(L (d - 1)).
double mub_witness_b_closed_form(int d, int k, int num_bases);

// {"kind","d","k","constant","frame_size","rotation_seed"?,"rotations","frame","matrix"?}
Json witness_to_json(const WitnessOperator& w, bool include_matrix);

}  // namespace snw
