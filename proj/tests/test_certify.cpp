#include <doctest.h>

#include <cmath>

#include "snw/certify.hpp"
#include "test_support.hpp"

using namespace snw;
using snw::testing::max_abs;

namespace {

CertifyStrategy strategy_for(int d, int random_seeds = 4) {
  CertifyStrategy s;
  if (d <= 5) s.sic = testing::test_sic(d);
  if (d == 4 || is_prime(d)) s.mubs = testing::test_mubs(d);
  s.rotation_seeds = default_rotation_seeds(random_seeds);
  return s;
}

const Evidence& find(const CertificateReport& r, int k, EvidenceMethod m) {
  for (const auto& e : r.evidence)
    if (e.k == k && e.method == m) return e;
  throw std::runtime_error("missing evidence");
}

}  // namespace

TEST_CASE("fidelity bound") {
  const FidelityBound phi = fidelity_bound(max_entangled_state(3));
  CHECK(phi.fidelity == doctest::Approx(1.0));
  CHECK(phi.sn_lower == 3);
  const FidelityBound mixed = fidelity_bound(DensityOperator(identity(9) / 9.0));
  CHECK(mixed.fidelity == doctest::Approx(1.0 / 9.0));
  CHECK(mixed.sn_lower == 1);
  const FidelityBound iso = fidelity_bound(isotropic_state(3, 0.65));
  CHECK(iso.fidelity == doctest::Approx(0.65 + 0.35 / 9.0).epsilon(1e-12));
  CHECK(iso.sn_lower == 3);
  // exactly k/d certifies nothing: p with F = 2/3
  const double p_edge = (2.0 / 3.0 - 1.0 / 9.0) / (1.0 - 1.0 / 9.0);
  CHECK(fidelity_bound(isotropic_state(3, p_edge)).sn_lower == 2);
  // Schmidt-rank-2 maximally entangled state in d = 3 has F = 2/3 exactly
  ComplexVector v = ComplexVector::Zero(9);
  v(0) = v(4) = 1.0 / std::sqrt(2.0);
  const FidelityBound r2 = fidelity_bound(DensityOperator::from_pure(PureStateVector(v)));
  CHECK(r2.fidelity == doctest::Approx(2.0 / 3.0));
  CHECK(r2.sn_lower == 2);
  CHECK_THROWS_AS(fidelity_bound(DensityOperator(identity(3) / 3.0)), Error);
}

TEST_CASE("isotropic states") {
  CHECK(max_abs(isotropic_state(3, 1.0).matrix() - max_entangled_state(3).matrix()) <= 1e-15);
  CHECK(max_abs(isotropic_state(3, 0.0).matrix() - identity(9) / 9.0) <= 1e-15);
  const DensityOperator low = isotropic_state(2, -1.0 / 3.0);
  CHECK(min_eigenvalue(low.as_hermitian()) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(isotropic_state(2, -0.5), Error);
  CHECK_THROWS_AS(isotropic_state(2, 1.01), Error);
}

TEST_CASE("random rank-k pure states") {
  for (int d : {2, 3, 4}) {
    for (int k = 1; k <= d; ++k) {
      for (std::uint64_t s = 0; s < 20; ++s) {
        const PureStateVector u = random_rank_k_pure(d, k, RngSeed{s}, SchmidtSpectrum::Uniform);
        CHECK(schmidt_rank(u, d) == k);
        const RealVector c = schmidt_coefficients(u, d, d);
        for (int i = 0; i < k; ++i) CHECK(c(i) * c(i) == doctest::Approx(1.0 / k).epsilon(1e-10));
        const PureStateVector r = random_rank_k_pure(d, k, RngSeed{s});
        CHECK(schmidt_rank(r, d) <= k);
      }
    }
  }
  CHECK((random_rank_k_pure(3, 2, RngSeed{8}).amplitudes() - random_rank_k_pure(3, 2, RngSeed{8}).amplitudes())
            .norm() == 0.0);
  CHECK_THROWS_AS(random_rank_k_pure(3, 4, RngSeed{1}), Error);
}

TEST_CASE("S_k samples") {
  const SkSample s = sample_sk_state(3, 2, 5, RngSeed{4});
  CHECK(s.weights.size() == 5);
  double total = 0.0;
  for (double w : s.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& c : s.components) CHECK(schmidt_rank(c, 3) <= 2);
  CHECK(s.state.matrix().trace().real() == doctest::Approx(1.0));

  const PureStateVector prod = PureStateVector::basis(4, 0);
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK_NOTHROW(make_sk_sample(2, 2, {0.5, 0.5}, {prod, PureStateVector(bell)}));
  CHECK_THROWS_AS(make_sk_sample(2, 1, {0.5, 0.5}, {prod, PureStateVector(bell)}), Error);
  CHECK_THROWS_AS(make_sk_sample(2, 2, {0.7, 0.5}, {prod, PureStateVector(bell)}), Error);
  CHECK_THROWS_AS(make_sk_sample(2, 2, {1.5, -0.5}, {prod, PureStateVector(bell)}), Error);
  CHECK_THROWS_AS(make_sk_sample(2, 2, {1.0}, {prod, prod}), Error);
}

TEST_CASE("certification examples") {
  const Certifier c3(3, 2, strategy_for(3));
  SUBCASE("maximally entangled state") {
    const CertificateReport r = c3.certify(max_entangled_state(3));
    CHECK(r.sn_lower_bound == 3);
    CHECK(r.conclusion() == "SN \xE2\x89\xA5 3");
    CHECK(find(r, 1, EvidenceMethod::MubWitness).value == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(find(r, 2, EvidenceMethod::MubWitness).value <= -0.153531);
    CHECK(find(r, 2, EvidenceMethod::SicWitness).certified);
    CHECK(find(r, 2, EvidenceMethod::KmapSpectrum).certified);
    CHECK(find(r, 2, EvidenceMethod::Fidelity).verdict() == "SN \xE2\x89\xA5 3");
    REQUIRE(r.distance_bounds.size() == 2);
    CHECK(r.distance_bounds[0].lower.value() >= 1.0 / std::sqrt(2.0) - 1e-12);
    CHECK(r.distance_bounds[1].lower.value() >= 0.297311);
    CHECK_FALSE(r.distance_bounds[0].upper_sampled.has_value());
  }
  SUBCASE("maximally mixed state certifies nothing") {
    const CertificateReport r = c3.certify(DensityOperator(identity(9) / 9.0));
    CHECK(r.sn_lower_bound == 1);
    for (const auto& e : r.evidence) CHECK(e.verdict() == "inconclusive");
  }
  SUBCASE("isotropic p = 0.65") {
    const CertificateReport r = c3.certify(isotropic_state(3, 0.65));
    CHECK(r.sn_lower_bound == 3);
    CHECK(find(r, 2, EvidenceMethod::Fidelity).value == doctest::Approx(0.688888888888889));
    CHECK_FALSE(find(r, 2, EvidenceMethod::MubWitness).certified);
    CHECK(find(r, 1, EvidenceMethod::MubWitness).certified);
  }
  SUBCASE("deterministic and matches the one-shot helper") {
    const DensityOperator rho = testing::random_density(9, RngSeed{3});
    const Json a = report_to_json(c3.certify(rho));
    const Json b = report_to_json(certify_schmidt_number(rho, 2, strategy_for(3)));
    CHECK(a.dump() == b.dump());
    CHECK(a["version"] == "report_v1");
    CHECK(a["input_digest"] == state_digest(rho.matrix()));
  }
  CHECK_THROWS_AS(c3.certify(max_entangled_state(2)), Error);
}

TEST_CASE("certifier configuration errors") {
  try {
    (void)Certifier(3, 2, CertifyStrategy{});
    FAIL("expected NoFrames");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoFrames);
  }
  CHECK_THROWS_AS(Certifier(3, 4, strategy_for(3)), Error);
  CHECK_THROWS_AS(Certifier(2, 1, strategy_for(3)), Error);
}

TEST_CASE("report JSON") {
  CertifyStrategy s = strategy_for(2, 2);
  s.distance_samples = 10;
  const CertificateReport r = Certifier(2, 1, s).certify(max_entangled_state(2));
  const Json j = report_to_json(r);
  CHECK(j["d"] == 2);
  CHECK(j["strategy"]["frames"] == Json::array({"sic", "mub"}));
  CHECK(j["strategy"]["rotation_seeds"] == Json::array({0, 1, 2}));
  CHECK(j["strategy"]["distance_components"] == 4);
  CHECK(j["evidence"].size() == 4);
  CHECK(j["evidence"][0]["method"] == "fidelity");
  CHECK(j["evidence"][0]["rotation_seed"].is_null());
  CHECK(j["evidence"][3]["method"] == "kmap-spectrum");
  CHECK(j["evidence"][3]["map_kind"].is_string());
  CHECK(j["sn_lower_bound"] == 2);
  CHECK(j["conclusion"] == "SN \xE2\x89\xA5 2");
  CHECK(j["distance_bounds"][0]["upper_sampled"].is_number());
  CHECK(state_digest(identity(2)) == state_digest(identity(2)));
  CHECK(state_digest(identity(2)) != state_digest(2.0 * identity(2)));
  CHECK(state_digest(identity(2)).rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("distance bounds") {
  const auto m3 = testing::test_mubs(3);
  CHECK(distance_lower_bound(max_entangled_state(3), mub_witness(2, m3, RngSeed{0})) ==
        doctest::Approx(0.297311).epsilon(1e-5));
  CHECK(distance_lower_bound(max_entangled_state(3), mub_witness(1, m3, RngSeed{0})) ==
        doctest::Approx(0.707107).epsilon(1e-5));
  for (std::uint64_t s = 0; s < 50; ++s) {
    CHECK(distance_lower_bound(sample_sk_state(3, 2, 4, RngSeed{s}).state, mub_witness(2, m3, RngSeed{0})) == 0.0);
  }
  CHECK_THROWS_AS(distance_lower_bound(max_entangled_state(3), sic_witness(1, testing::test_sic(3), RngSeed{0})),
                  Error);
}

TEST_CASE("sampled upper bound") {
  SUBCASE("a state among the draws is at distance zero") {
    const SkSample inside = sample_sk_state(3, 2, 6, derive_seed(RngSeed{5}, 3));
    CHECK(distance_upper_bound_sampler(inside.state, 3, 2, 10, 6, RngSeed{5}) == 0.0);
  }
  SUBCASE("larger budgets never increase the bound") {
    const DensityOperator rho = max_entangled_state(3);
    double prev = distance_upper_bound_sampler(rho, 3, 1, 1, 0, RngSeed{2});
    for (int n : {5, 25, 100}) {
      const double next = distance_upper_bound_sampler(rho, 3, 1, n, 0, RngSeed{2});
      CHECK(next <= prev);
      prev = next;
    }
  }
  SUBCASE("lower bound stays below the sampled bound") {
    const auto m2 = testing::test_mubs(2);
    const auto m3 = testing::test_mubs(3);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const DensityOperator rho = testing::random_pure_density(9, RngSeed{s});
      for (int k = 1; k < 3; ++k) {
        double lower = 0.0;
        for (std::uint64_t seed = 0; seed < 3; ++seed)
          lower = std::max(lower, distance_lower_bound(rho, mub_witness(k, m3, RngSeed{seed})));
        CHECK(lower <= distance_upper_bound_sampler(rho, 3, k, 50, 0, RngSeed{s}) + 1e-9);
      }
      const DensityOperator r2 = testing::random_pure_density(4, RngSeed{s});
      CHECK(distance_lower_bound(r2, mub_witness(1, m2, RngSeed{0})) <=
            distance_upper_bound_sampler(r2, 2, 1, 50, 0, RngSeed{s}) + 1e-9);
    }
  }
  CHECK_THROWS_AS(distance_upper_bound_sampler(max_entangled_state(2), 2, 1, 0, 0, RngSeed{1}), Error);
  CHECK_THROWS_AS(distance_upper_bound_sampler(max_entangled_state(2), 3, 1, 5, 0, RngSeed{1}), Error);
}

TEST_CASE("no false certification on S_k draws") {
  for (int d : {2, 3}) {
    const Certifier c(d, d - 1, strategy_for(d, 3));
    for (int k = 1; k < d; ++k) {
      for (std::uint64_t s = 0; s < 100; ++s) {
        const CertificateReport r = c.certify(sample_sk_state(d, k, 2, RngSeed{1000 + s}).state);
        REQUIRE(r.sn_lower_bound <= k);
      }
    }
  }
}
