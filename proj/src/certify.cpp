#include "snw/certify.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace snw {
namespace {

int local_dim_of(const DensityOperator& rho) {
  return bipartite_local_dim(rho.dim());
}

std::string sn_text(int n) {
  return "SN \xE2\x89\xA5 " + std::to_string(n);  // "SN ≥ n"
}

std::vector<double> dirichlet(CounterRng& rng, int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& x : w) {
    x = rng.exponential();
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

FidelityBound fidelity_bound(const DensityOperator& rho) {
  const int d = local_dim_of(rho);
  double f = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f += rho.matrix()(i * d + i, j * d + j).real();
  f /= d;
  FidelityBound out{f, 1};
  for (int k = 1; k < d; ++k) {
    if (f > static_cast<double>(k) / d + tol::kSlack) out.sn_lower = k + 1;
  }
  return out;
}

DensityOperator isotropic_state(int d, double p) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "isotropic_state: d must be >= 1");
  const double lo = d > 1 ? -1.0 / (double(d) * d - 1.0) : 0.0;
  if (!(p >= lo - 1e-15 && p <= 1.0 + 1e-15)) {
    throw Error(ErrorCode::InvalidArgument, "isotropic_state: p outside [-1/(d^2-1), 1]");
  }
  const ComplexMatrix m = (p / d) * max_entangled_kernel(d) +
                          ((1.0 - p) / (double(d) * d)) * ComplexMatrix::Identity(d * d, d * d);
  return DensityOperator(m);
}

PureStateVector random_rank_k_pure(int d, int k, RngSeed seed, SchmidtSpectrum spectrum) {
  if (d < 1 || k < 1 || k > d) throw Error(ErrorCode::InvalidArgument, "random_rank_k_pure: need 1 <= k <= d");
  const ComplexMatrix u = haar_unitary(d, derive_seed(seed, 0));
  const ComplexMatrix v = haar_unitary(d, derive_seed(seed, 1));
  std::vector<double> mu(static_cast<std::size_t>(k), 1.0 / k);
  if (spectrum == SchmidtSpectrum::Dirichlet) {
    CounterRng rng(derive_seed(seed, 2));
    mu = dirichlet(rng, k);
  }
  // coefficient matrix C = U diag(sqrt(mu)) V^T restricted to the first k columns
  ComplexMatrix c = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < k; ++i) c += std::sqrt(mu[i]) * u.col(i) * v.col(i).transpose();
  ComplexVector psi(d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) psi(a * d + b) = c(a, b);
  return PureStateVector::normalized(psi);
}

int schmidt_rank(const PureStateVector& psi, int d) {
  const RealVector s = schmidt_coefficients(psi, d, d);
  return static_cast<int>((s.array() > 1e-10).count());
}

SkSample make_sk_sample(int d, int k, std::vector<double> weights, std::vector<PureStateVector> components) {
  if (weights.size() != components.size() || weights.empty()) {
    throw Error(ErrorCode::InvalidArgument, "S_k sample needs one weight per component");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidArgument, "S_k sample weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "S_k sample weights must sum to 1");
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (components[c].dim() != d * d) throw Error(ErrorCode::DimensionMismatch, "component is not on d (x) d");
    if (schmidt_rank(components[c], d) > k) {
      throw Error(ErrorCode::InvalidArgument, "component Schmidt rank exceeds k");
    }
    if (weights[c] > 0.0) m += weights[c] * components[c].projector();
  }
  return SkSample{k, std::move(weights), std::move(components), DensityOperator(m)};
}

SkSample sample_sk_state(int d, int k, int components, RngSeed seed) {
  if (components < 1) throw Error(ErrorCode::InvalidArgument, "sample_sk_state: components must be >= 1");
  CounterRng rng(derive_seed(seed, 0));
  std::vector<double> weights = dirichlet(rng, components);
  std::vector<PureStateVector> parts;
  parts.reserve(static_cast<std::size_t>(components));
  for (int c = 0; c < components; ++c) {
    parts.push_back(random_rank_k_pure(d, k, derive_seed(seed, static_cast<std::uint64_t>(c) + 1)));
  }
  return make_sk_sample(d, k, std::move(weights), std::move(parts));
}

double distance_lower_bound(const DensityOperator& rho, const WitnessOperator& w) {
  const double value = evaluate(w, rho);
  const double b = witness_b_constant(w);
  if (!(b > 0.0)) return 0.0;
  return std::max(0.0, -value / b);
}

double distance_upper_bound_sampler(const DensityOperator& rho, int d, int k, int samples, int components,
                                    RngSeed seed) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "distance sampler needs samples >= 1");
  if (rho.dim() != d * d) throw Error(ErrorCode::DimensionMismatch, "state is not on d (x) d");
  if (components < 1) components = 2 * d;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const SkSample s = sample_sk_state(d, k, components, derive_seed(seed, static_cast<std::uint64_t>(i)));
    best = std::min(best, (rho.matrix() - s.state.matrix()).norm());
  }
  return best;
}

const char* to_string(EvidenceMethod method) {
  switch (method) {
    case EvidenceMethod::Fidelity: return "fidelity";
    case EvidenceMethod::SicWitness: return "sic-witness";
    case EvidenceMethod::MubWitness: return "mub-witness";
    case EvidenceMethod::KmapSpectrum: return "kmap-spectrum";
  }
  return "unknown";
}

std::string Evidence::verdict() const {
  return certified ? sn_text(k + 1) : "inconclusive";
}

std::string CertificateReport::conclusion() const {
  return sn_text(sn_lower_bound);
}

std::vector<std::uint64_t> default_rotation_seeds(int random_count) {
  std::vector<std::uint64_t> seeds;
  for (int s = 0; s <= random_count; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  return seeds;
}

Certifier::Certifier(int d, int max_k, CertifyStrategy strategy)
    : d_(d), max_k_(max_k), strategy_(std::move(strategy)) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "certification needs local dimension >= 2");
  if (max_k < 1 || max_k > d) {
    throw Error(ErrorCode::InvalidArgument, "max_k must lie in [1, " + std::to_string(d) + "]");
  }
  if (strategy_.sic && strategy_.sic->d != d) throw Error(ErrorCode::DimensionMismatch, "SIC dimension differs from state");
  if (strategy_.mubs && strategy_.mubs->d != d) {
    throw Error(ErrorCode::DimensionMismatch, "MUB dimension differs from state");
  }
  if (!strategy_.sic && !strategy_.mubs) {
    throw Error(ErrorCode::NoFrames, "no SIC or MUB frames available for d=" + std::to_string(d));
  }
  if (strategy_.rotation_seeds.empty()) strategy_.rotation_seeds = {0};
  if (strategy_.distance_components < 1) strategy_.distance_components = 2 * d;

  for (int k = 1; k <= max_k; ++k) {
    Level level;
    for (std::uint64_t seed : strategy_.rotation_seeds) {
      if (strategy_.sic) level.sic_witnesses.push_back(sic_witness(k, strategy_.sic, RngSeed{seed}));
      if (strategy_.mubs) level.mub_witnesses.push_back(mub_witness(k, strategy_.mubs, RngSeed{seed}));
    }
    if (strategy_.kmap_spectrum) {
      for (const auto& w : level.sic_witnesses) level.maps.push_back(witness_map(w));
      for (const auto& w : level.mub_witnesses) level.maps.push_back(witness_map(w));
    }
    levels_.push_back(std::move(level));
  }
}

CertificateReport Certifier::certify(const DensityOperator& rho) const {
  if (rho.dim() != d_ * d_) throw Error(ErrorCode::DimensionMismatch, "state is not on the d (x) d space");
  CertificateReport report;
  report.d = d_;
  report.input_digest = state_digest(rho.matrix());
  report.max_k = max_k_;
  report.rotation_seeds = strategy_.rotation_seeds;
  report.used_sic = static_cast<bool>(strategy_.sic);
  report.used_mub = static_cast<bool>(strategy_.mubs);
  report.distance_samples = strategy_.distance_samples;
  report.distance_components = strategy_.distance_components;
  report.distance_seed = strategy_.distance_seed;

  const FidelityBound fid = fidelity_bound(rho);
  int best_certified_k = 0;

  auto best_witness = [&](const std::vector<WitnessOperator>& ws, int k, EvidenceMethod method) {
    Evidence e{k, method, std::numeric_limits<double>::infinity(), 0.0, std::nullopt, std::nullopt, false};
    for (const auto& w : ws) {
      const double v = evaluate(w, rho);
      if (v < e.value) {
        e.value = v;
        e.rotation_seed = w.rotation_seed ? std::optional<std::uint64_t>(w.rotation_seed->value) : std::nullopt;
      }
    }
    e.certified = e.value < -tol::kSlack;
    return e;
  };

  for (int k = 1; k <= max_k_; ++k) {
    const Level& level = levels_[k - 1];
    std::vector<Evidence> cell;

    const double threshold = static_cast<double>(k) / d_;
    cell.push_back(Evidence{k, EvidenceMethod::Fidelity, fid.fidelity, threshold, std::nullopt, std::nullopt,
                            fid.fidelity > threshold + tol::kSlack});
    if (!level.sic_witnesses.empty()) cell.push_back(best_witness(level.sic_witnesses, k, EvidenceMethod::SicWitness));
    if (!level.mub_witnesses.empty()) cell.push_back(best_witness(level.mub_witnesses, k, EvidenceMethod::MubWitness));
    if (!level.maps.empty()) {
      Evidence e{k, EvidenceMethod::KmapSpectrum, std::numeric_limits<double>::infinity(), 0.0,
                 std::nullopt, std::nullopt, false};
      const std::size_t per_kind = strategy_.rotation_seeds.size();
      for (std::size_t m = 0; m < level.maps.size(); ++m) {
        const double v = min_eigenvalue(apply_extended(level.maps[m], rho.matrix()));
        if (v < e.value) {
          e.value = v;
          e.map_kind = level.maps[m].kind();
          e.rotation_seed = strategy_.rotation_seeds[m % per_kind];
        }
      }
      e.certified = e.value < -tol::kSlack;
      cell.push_back(e);
    }
    for (auto& e : cell) {
      if (e.certified) best_certified_k = std::max(best_certified_k, k);
      report.evidence.push_back(std::move(e));
    }

    if (!level.mub_witnesses.empty() || strategy_.distance_samples > 0) {
      DistanceBound bound{k, std::nullopt, std::nullopt};
      if (!level.mub_witnesses.empty()) {
        double lower = 0.0;
        for (const auto& w : level.mub_witnesses) lower = std::max(lower, distance_lower_bound(rho, w));
        bound.lower = lower;
      }
      if (strategy_.distance_samples > 0) {
        bound.upper_sampled =
            distance_upper_bound_sampler(rho, d_, k, strategy_.distance_samples, strategy_.distance_components,
                                         derive_seed(RngSeed{strategy_.distance_seed}, static_cast<std::uint64_t>(k)));
      }
      report.distance_bounds.push_back(bound);
    }
  }
  report.sn_lower_bound = 1 + best_certified_k;
  return report;
}

CertificateReport certify_schmidt_number(const DensityOperator& rho, int max_k, const CertifyStrategy& strategy) {
  return Certifier(local_dim_of(rho), max_k, strategy).certify(rho);
}

std::string state_digest(const ComplexMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](double x) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (bits >> (8 * byte)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      feed(m(r, c).real());
      feed(m(r, c).imag());
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

Json report_to_json(const CertificateReport& report) {
  Json j;
  j["version"] = "report_v1";
  j["d"] = report.d;
  j["input_digest"] = report.input_digest;
  j["max_k"] = report.max_k;
  Json frames = Json::array();
  if (report.used_sic) frames.push_back("sic");
  if (report.used_mub) frames.push_back("mub");
  j["strategy"] = {{"frames", frames},
                   {"rotation_seeds", report.rotation_seeds},
                   {"distance_samples", report.distance_samples},
                   {"distance_components", report.distance_components},
                   {"distance_seed", report.distance_seed}};
  Json evidence = Json::array();
  for (const auto& e : report.evidence) {
    Json item;
    item["k"] = e.k;
    item["method"] = to_string(e.method);
    item["value"] = e.value;
    item["threshold"] = e.threshold;
    item["rotation_seed"] = e.rotation_seed ? Json(*e.rotation_seed) : Json(nullptr);
    item["map_kind"] = e.map_kind ? Json(to_string(*e.map_kind)) : Json(nullptr);
    item["verdict"] = e.verdict();
    evidence.push_back(std::move(item));
  }
  j["evidence"] = std::move(evidence);
  j["sn_lower_bound"] = report.sn_lower_bound;
  j["conclusion"] = report.conclusion();
  Json distances = Json::array();
  for (const auto& b : report.distance_bounds) {
    distances.push_back({{"k", b.k},
                         {"lower", b.lower ? Json(*b.lower) : Json(nullptr)},
                         {"upper_sampled", b.upper_sampled ? Json(*b.upper_sampled) : Json(nullptr)}});
  }
  j["distance_bounds"] = std::move(distances);
  return j;
}

}  // namespace snw
