#include "snw/witness.hpp"

#include <cmath>

namespace snw {

WitnessOperator sic_witness(int k, std::shared_ptr<const SicPovm> sic, const RealMatrix& rotation) {
  // build_sic_map validates k, the rotation and the frame
  const KPositiveMap map = build_sic_map(k, sic, rotation);
  const int d = sic->d;
  const double h = map.constant();
  const auto n = static_cast<Eigen::Index>(sic->effects.size());

  ComplexMatrix w = ((h + d) / (double(d) * d)) * ComplexMatrix::Identity(d * d, d * d);
  for (Eigen::Index g = 0; g < n; ++g) {
    ComplexMatrix left = ComplexMatrix::Zero(d, d);
    for (Eigen::Index l = 0; l < n; ++l) {
      if (rotation(g, l) != 0.0) left += rotation(g, l) * sic->effects[l].conjugate();
    }
    w -= h * kron(left, sic->effects[g]);
  }
  return WitnessOperator{d, k, MapKind::Sic, HermitianOperator::symmetrized(w), h, static_cast<int>(n),
                         std::nullopt, {rotation}, std::move(sic), nullptr};
}

WitnessOperator sic_witness(int k, std::shared_ptr<const SicPovm> sic, RngSeed rotation_seed) {
  const int d = sic->d;
  WitnessOperator w = sic_witness(k, std::move(sic), sic_rotation(d, rotation_seed));
  w.rotation_seed = rotation_seed;
  return w;
}

WitnessOperator sic_witness(int k, const SicPovm& sic, const RealMatrix& rotation) {
  return sic_witness(k, std::make_shared<const SicPovm>(sic), rotation);
}

WitnessOperator mub_witness(int k, std::shared_ptr<const MubCollection> mubs,
                            const std::vector<RealMatrix>& rotations) {
  const KPositiveMap map = build_mub_map(k, mubs, rotations);
  const int d = mubs->d;
  const int num_bases = mubs->size();
  const double hs = map.constant();

  ComplexMatrix w = ((1.0 + num_bases * hs) / d) * ComplexMatrix::Identity(d * d, d * d);
  for (int alpha = 0; alpha < num_bases; ++alpha) {
    const auto& proj = mubs->projectors[alpha];
    for (int g = 0; g < d; ++g) {
      ComplexMatrix left = ComplexMatrix::Zero(d, d);
      for (int l = 0; l < d; ++l) {
        if (rotations[alpha](g, l) != 0.0) left += rotations[alpha](g, l) * proj[l].conjugate();
      }
      w -= hs * kron(left, proj[g]);
    }
  }
  return WitnessOperator{d, k, MapKind::Mub, HermitianOperator::symmetrized(w), hs, num_bases,
                         std::nullopt, rotations, nullptr, std::move(mubs)};
}

WitnessOperator mub_witness(int k, std::shared_ptr<const MubCollection> mubs, RngSeed rotation_seed) {
  const auto rots = mub_rotations(mubs->d, mubs->size(), rotation_seed);
  WitnessOperator w = mub_witness(k, std::move(mubs), rots);
  w.rotation_seed = rotation_seed;
  return w;
}

WitnessOperator mub_witness(int k, const MubCollection& mubs, const std::vector<RealMatrix>& rotations) {
  return mub_witness(k, std::make_shared<const MubCollection>(mubs), rotations);
}

KPositiveMap witness_map(const WitnessOperator& w) {
  if (w.kind == MapKind::Sic) return build_sic_map(w.k, w.sic, w.rotations.at(0));
  return build_mub_map(w.k, w.mubs, w.rotations);
}

double evaluate(const WitnessOperator& w, const ComplexMatrix& rho) {
  if (rho.rows() != w.matrix.dim() || rho.cols() != w.matrix.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "witness and state dimensions differ");
  }
  // Tr(W rho) = Sum_ij W_ij rho_ji
  return (w.matrix.matrix().transpose().array() * rho.array()).sum().real();
}

double evaluate(const WitnessOperator& w, const DensityOperator& rho) {
  return evaluate(w, rho.matrix());
}

double witness_b_constant(const WitnessOperator& w) {
  if (w.kind != MapKind::Mub) {
    throw Error(ErrorCode::InvalidArgument, "the b constant is defined for MUB witnesses");
  }
  const ComplexMatrix& m = w.matrix.matrix();
  const double n = static_cast<double>(m.rows());
  const double tr = m.trace().real();
  const double value = m.squaredNorm() - tr * tr / n;
  return std::sqrt(std::max(0.0, value));
}

double mub_witness_b_closed_form(int d, int k, int num_bases) {
  return mub_map_constant(d, k, num_bases) * std::sqrt(static_cast<double>(num_bases) * (d - 1));
}

Json witness_to_json(const WitnessOperator& w, bool include_matrix) {
  Json j;
  j["kind"] = to_string(w.kind);
  j["d"] = w.d;
  j["k"] = w.k;
  j["constant"] = w.constant;
  j["frame_size"] = w.frame_size;
  if (w.rotation_seed) j["rotation_seed"] = w.rotation_seed->value;
  Json rots = Json::array();
  for (const auto& o : w.rotations) rots.push_back(real_matrix_to_json(o));
  j["rotations"] = std::move(rots);
  if (w.sic) j["frame"] = frame_to_json(*w.sic);
  if (w.mubs) j["frame"] = frame_to_json(*w.mubs);
  if (include_matrix) j["matrix"] = complex_matrix_to_json(w.matrix.matrix());
  return j;
}

}  // namespace snw
