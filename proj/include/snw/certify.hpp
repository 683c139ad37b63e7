#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "snw/frames.hpp"
#include "snw/io.hpp"
#include "snw/kmaps.hpp"
#include "snw/witness.hpp"

namespace snw {

struct FidelityBound {
  double fidelity = 0.0;  // Tr(rho Phi) with the normalized maximally entangled projector
  int sn_lower = 1;
};

/// rho in S_k implies F <= k/d, so F > k/d + slack certifies SN >= k + 1.
/// A fidelity exactly at k/d certifies nothing.
FidelityBound fidelity_bound(const DensityOperator& rho);

/// p Phi + (1 - p) I/d^2 for p in [-1/(d^2 - 1), 1].
DensityOperator isotropic_state(int d, double p);

enum class SchmidtSpectrum { Uniform, Dirichlet };

/// (U (x) V) Sum_{i<k} sqrt(mu_i) |ii> with Haar U, V and uniform or Dirichlet(1,...,1) mu.
PureStateVector random_rank_k_pure(int d, int k, RngSeed seed,
                                   SchmidtSpectrum spectrum = SchmidtSpectrum::Dirichlet);

/// Mixture of pure states of Schmidt rank <= k, hence a member of S_k.
struct SkSample {
  int k = 1;
  std::vector<double> weights;
  std::vector<PureStateVector> components;
  DensityOperator state;
};

/// Validates weights (nonnegative, sum 1) and component Schmidt ranks.
SkSample make_sk_sample(int d, int k, std::vector<double> weights, std::vector<PureStateVector> components);

/// Dirichlet(1,...,1) weights over `components` draws of random_rank_k_pure.
SkSample sample_sk_state(int d, int k, int components, RngSeed seed);

/// Number of Schmidt coefficients above 1e-10.
int schmidt_rank(const PureStateVector& psi, int d);

/// max(0, -Tr(W rho) / b). A lower bound on min_{sigma in S_k} ||rho - sigma||_F.
double distance_lower_bound(const DensityOperator& rho, const WitnessOperator& w);

/// Minimum of ||rho - sigma||_F over `samples` S_k draws; sample i uses
/// derive_seed(seed, i), so larger budgets extend smaller ones.
double distance_upper_bound_sampler(const DensityOperator& rho, int d, int k, int samples, int components,
                                    RngSeed seed);

enum class EvidenceMethod { Fidelity, SicWitness, MubWitness, KmapSpectrum };
const char* to_string(EvidenceMethod method);

struct Evidence {
  int k = 1;
  EvidenceMethod method = EvidenceMethod::Fidelity;
  double value = 0.0;
  double threshold = 0.0;  // k/d for fidelity, 0 otherwise
  std::optional<std::uint64_t> rotation_seed;
  std::optional<MapKind> map_kind;  // kmap-spectrum only
  bool certified = false;           // SN >= k + 1

  std::string verdict() const;
};

struct DistanceBound {
  int k = 1;
  std::optional<double> lower;
  std::optional<double> upper_sampled;
};

struct CertificateReport {
  int d = 0;
  std::string input_digest;
  int max_k = 1;
  std::vector<std::uint64_t> rotation_seeds;
  bool used_sic = false;
  bool used_mub = false;
  int distance_samples = 0;
  int distance_components = 0;
  std::uint64_t distance_seed = 0;
  std::vector<Evidence> evidence;  // ordered by (k, method)
  int sn_lower_bound = 1;
  std::vector<DistanceBound> distance_bounds;

  std::string conclusion() const;
};

/// Rotation seeds {0, 1, ..., random_count}; seed 0 is the identity rotation.
std::vector<std::uint64_t> default_rotation_seeds(int random_count = 16);

struct CertifyStrategy {
  std::shared_ptr<const SicPovm> sic;
  std::shared_ptr<const MubCollection> mubs;
  std::vector<std::uint64_t> rotation_seeds = default_rotation_seeds();
  bool kmap_spectrum = true;
  int distance_samples = 0;     // 0 skips the sampled upper bound
  int distance_components = 0;  // 0 means 2d
  std::uint64_t distance_seed = 1;
};

/// Precomputes witnesses and maps for (d, max_k, strategy); reusable across states.
class Certifier {
 public:
  /// Throws NoFrames when the strategy carries neither a SIC nor MUBs.
  Certifier(int d, int max_k, CertifyStrategy strategy);

  CertificateReport certify(const DensityOperator& rho) const;

  int d() const { return d_; }
  int max_k() const { return max_k_; }

 private:
  struct Level {
    std::vector<WitnessOperator> sic_witnesses;
    std::vector<WitnessOperator> mub_witnesses;
    std::vector<KPositiveMap> maps;
  };

  int d_;
  int max_k_;
  CertifyStrategy strategy_;
  std::vector<Level> levels_;  // index k - 1
};

CertificateReport certify_schmidt_number(const DensityOperator& rho, int max_k, const CertifyStrategy& strategy);

/// "fnv1a64:<hex>" over the little-endian bytes of (re, im) in row-major order.
std::string state_digest(const ComplexMatrix& m);

Json report_to_json(const CertificateReport& report);

}  // namespace snw
