#include "snw/kmaps.hpp"

#include <algorithm>
#include <cmath>

namespace snw {
namespace {

void check_order(int d, int k) {
  if (k < 1 || k > d) {
    throw Error(ErrorCode::InvalidArgument,
                "positivity order k=" + std::to_string(k) + " outside [1, " + std::to_string(d) + "]");
  }
}

void check_rotation(const RealMatrix& o, Eigen::Index n) {
  if (o.rows() != n || o.cols() != n) {
    throw Error(ErrorCode::InvalidRotation, "rotation must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (rotation_defect(o) > tol::kRotation) {
    throw Error(ErrorCode::InvalidRotation, "rotation is not orthogonal with fixed all-ones axis");
  }
}

// Tr(X P) for square X, P
cplx trace_product(const ComplexMatrix& x, const ComplexMatrix& p) {
  return (x.transpose().array() * p.array()).sum();
}

}  // namespace

const char* to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Sic: return "sic";
    case MapKind::Mub: return "mub";
    case MapKind::Reduction: return "reduction";
  }
  return "unknown";
}

double sic_map_constant(int d, int k) {
  check_order(d, k);
  const double dd = d;
  const double kk = k;
  const double denom = (kk * dd - 1.0) * (kk * dd + kk - 2.0);
  if (!(denom > 0.0)) throw Error(ErrorCode::InvalidArgument, "SIC map constant undefined for d=1");
  return std::sqrt((dd * dd * dd * dd + dd * dd * dd) / denom);
}

double mub_map_constant(int d, int k, int num_bases) {
  check_order(d, k);
  if (num_bases < 1) throw Error(ErrorCode::InvalidArgument, "MUB map needs at least one basis");
  const double dd = d;
  const double kk = k;
  const double ll = num_bases;
  const double denom = (dd * kk - 1.0) * (ll * kk - ll + dd - 1.0);
  if (!(denom > 0.0)) throw Error(ErrorCode::InvalidArgument, "MUB map constant undefined for d=1");
  return std::sqrt(1.0 / denom);
}

RealMatrix sic_rotation(int d, RngSeed seed) {
  return random_orthogonal_fixing_ones(d * d, seed);
}

std::vector<RealMatrix> mub_rotations(int d, int num_bases, RngSeed seed) {
  std::vector<RealMatrix> out;
  for (int alpha = 0; alpha < num_bases; ++alpha) {
    RngSeed child = seed.value == 0 ? RngSeed{0} : derive_seed(seed, static_cast<std::uint64_t>(alpha));
    if (seed.value != 0 && child.value == 0) child = RngSeed{1};
    out.push_back(random_orthogonal_fixing_ones(d, child));
  }
  return out;
}

void KPositiveMap::materialize() {
  const int n = d_ * d_;
  superop_.resize(n, n);
  for (int i = 0; i < d_; ++i) {
    for (int j = 0; j < d_; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(d_, d_);
      unit(i, j) = 1.0;
      const ComplexMatrix image = apply_map(*this, unit);
      for (int a = 0; a < d_; ++a)
        for (int b = 0; b < d_; ++b) superop_(a * d_ + b, i * d_ + j) = image(a, b);
    }
  }
}

KPositiveMap build_sic_map(int k, const SicPovm& sic, const RealMatrix& rotation) {
  return build_sic_map(k, std::make_shared<const SicPovm>(sic), rotation);
}

KPositiveMap build_sic_map(int k, std::shared_ptr<const SicPovm> sic, const RealMatrix& rotation) {
  if (!sic) throw Error(ErrorCode::InvalidArgument, "null SIC");
  const int d = sic->d;
  check_order(d, k);
  check_rotation(rotation, static_cast<Eigen::Index>(d) * d);
  if (sic->effects.size() != static_cast<std::size_t>(d) * d) {
    throw Error(ErrorCode::InvalidArgument, "SIC must have d^2 effects");
  }
  KPositiveMap map;
  map.kind_ = MapKind::Sic;
  map.d_ = d;
  map.k_ = k;
  map.constant_ = sic_map_constant(d, k);
  map.sic_ = std::move(sic);
  map.rotations_ = {rotation};
  map.materialize();
  return map;
}

KPositiveMap build_mub_map(int k, const MubCollection& mubs, const std::vector<RealMatrix>& rotations) {
  return build_mub_map(k, std::make_shared<const MubCollection>(mubs), rotations);
}

KPositiveMap build_mub_map(int k, std::shared_ptr<const MubCollection> mubs,
                           const std::vector<RealMatrix>& rotations) {
  if (!mubs) throw Error(ErrorCode::InvalidArgument, "null MUB collection");
  const int d = mubs->d;
  check_order(d, k);
  if (static_cast<int>(rotations.size()) != mubs->size()) {
    throw Error(ErrorCode::InvalidRotation, "MUB map needs one rotation per basis (got " +
                                                std::to_string(rotations.size()) + ", L=" +
                                                std::to_string(mubs->size()) + ")");
  }
  for (const auto& o : rotations) check_rotation(o, d);
  KPositiveMap map;
  map.kind_ = MapKind::Mub;
  map.d_ = d;
  map.k_ = k;
  map.constant_ = mub_map_constant(d, k, mubs->size());
  map.mubs_ = std::move(mubs);
  map.rotations_ = rotations;
  map.materialize();
  return map;
}

KPositiveMap reduction_map(int d, double p) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "reduction map needs d >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "reduction map needs 0 < p <= 1");
  KPositiveMap map;
  map.kind_ = MapKind::Reduction;
  map.d_ = d;
  map.k_ = std::clamp(static_cast<int>(std::floor(1.0 / p + 1e-12)), 1, d);
  map.constant_ = p;
  map.materialize();
  return map;
}

ComplexMatrix apply_map(const KPositiveMap& map, const ComplexMatrix& x) {
  const int d = map.d_;
  if (x.rows() != d || x.cols() != d) throw Error(ErrorCode::DimensionMismatch, "apply_map: input must be d x d");
  const cplx tr = x.trace();
  switch (map.kind_) {
    case MapKind::Reduction:
      return tr * ComplexMatrix::Identity(d, d) - map.constant_ * x;
    case MapKind::Sic: {
      // Tr[(X - (I/d) Tr X) P_l] = Tr(X P_l) - Tr X / d^2
      const cplx offset = tr / static_cast<double>(d * d);
      ComplexMatrix out = (tr / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
      const auto n = static_cast<Eigen::Index>(map.sic_->effects.size());
      ComplexVector t(n);
      for (Eigen::Index l = 0; l < n; ++l) t(l) = trace_product(x, map.sic_->effects[l]) - offset;
      const ComplexVector u = map.rotations_[0].cast<cplx>() * t;
      for (Eigen::Index g = 0; g < n; ++g) out -= map.constant_ * u(g) * map.sic_->effects[g];
      return out;
    }
    case MapKind::Mub: {
      // Tr[(X - (I/d) Tr X) Q_l] = Tr(X Q_l) - Tr X / d
      ComplexMatrix out = (tr / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
      for (int alpha = 0; alpha < map.mubs_->size(); ++alpha) {
        const auto& proj = map.mubs_->projectors[alpha];
        ComplexVector t(d);
        for (int l = 0; l < d; ++l) t(l) = trace_product(x, proj[l]) - tr / static_cast<double>(d);
        const ComplexVector u = map.rotations_[alpha].cast<cplx>() * t;
        for (int g = 0; g < d; ++g) out -= map.constant_ * u(g) * proj[g];
      }
      return out;
    }
  }
  return {};
}

KPositiveMap adjoint_map(const KPositiveMap& map) {
  KPositiveMap adj = map;
  for (auto& o : adj.rotations_) o.transposeInPlace();
  if (map.kind_ != MapKind::Reduction) adj.materialize();
  return adj;
}

ComplexMatrix adjoint_apply(const KPositiveMap& map, const ComplexMatrix& x) {
  if (map.kind() == MapKind::Reduction) return apply_map(map, x);
  return apply_map(adjoint_map(map), x);
}

HermitianOperator choi(const KPositiveMap& map) {
  const int d = map.d();
  ComplexMatrix c(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      c.block(i * d, j * d, d, d) = apply_map(map, unit);
    }
  }
  return HermitianOperator::symmetrized(c);
}

HermitianOperator apply_extended(const KPositiveMap& map, const ComplexMatrix& rho) {
  const int d = map.d();
  if (rho.rows() != d * d || rho.cols() != d * d) {
    throw Error(ErrorCode::DimensionMismatch, "apply_extended: operator must act on the d (x) d space");
  }
  const ComplexMatrix& s = map.superoperator();
  ComplexMatrix out(d * d, d * d);
  ComplexVector block(d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) block(i * d + j) = rho(a * d + i, b * d + j);
      const ComplexVector image = s * block;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(a * d + i, b * d + j) = image(i * d + j);
    }
  }
  return HermitianOperator::symmetrized(out);
}

HermitianOperator apply_extended(const KPositiveMap& map, const DensityOperator& rho) {
  return apply_extended(map, rho.matrix());
}

Json map_to_json(const KPositiveMap& map) {
  Json j;
  j["kind"] = to_string(map.kind());
  j["d"] = map.d();
  j["k"] = map.k();
  j["constant"] = map.constant();
  Json rots = Json::array();
  for (const auto& o : map.rotations()) rots.push_back(real_matrix_to_json(o));
  j["rotations"] = std::move(rots);
  if (map.sic()) j["frame"] = frame_to_json(*map.sic());
  if (map.mubs()) j["frame"] = frame_to_json(*map.mubs());
  return j;
}

KPositiveMap map_from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int k = j.at("k").get<int>();
    if (kind == "reduction") return reduction_map(j.at("d").get<int>(), j.at("constant").get<double>());
    std::vector<RealMatrix> rots;
    for (const auto& r : j.at("rotations")) rots.push_back(real_matrix_from_json(r));
    Frame frame = frame_from_json(j.at("frame"));
    if (kind == "sic") {
      if (rots.size() != 1) throw Error(ErrorCode::Parse, "SIC map needs exactly one rotation");
      return build_sic_map(k, std::get<SicPovm>(frame), rots[0]);
    }
    if (kind == "mub") return build_mub_map(k, std::get<MubCollection>(frame), rots);
    throw Error(ErrorCode::Parse, "unknown map kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed map JSON: ") + e.what());
  } catch (const std::bad_variant_access&) {
    throw Error(ErrorCode::Parse, "map kind does not match frame kind");
  }
}

}  // namespace snw
