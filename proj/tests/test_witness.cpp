#include <doctest.h>

#include <cmath>

#include "snw/certify.hpp"
#include "snw/witness.hpp"
#include "test_support.hpp"

using namespace snw;
using snw::testing::max_abs;

TEST_CASE("witness equals the Choi matrix of its map") {
  for (int d : {2, 3, 4}) {
    const auto sic = testing::test_sic(d);
    const auto mubs = testing::test_mubs(d);
    for (int k = 1; k <= d; ++k) {
      for (std::uint64_t s : {0u, 1u, 2u}) {
        CAPTURE(d);
        CAPTURE(k);
        CAPTURE(s);
        const WitnessOperator ws = sic_witness(k, sic, RngSeed{s});
        CHECK(max_abs(ws.matrix.matrix() - choi(build_sic_map(k, sic, sic_rotation(d, RngSeed{s}))).matrix()) <= 1e-10);
        CHECK(max_abs(choi(witness_map(ws)).matrix() - ws.matrix.matrix()) <= 1e-10);
        CHECK(ws.matrix.trace() == doctest::Approx(double(d)).epsilon(1e-12));

        const WitnessOperator wm = mub_witness(k, mubs, RngSeed{s});
        const auto rots = mub_rotations(d, mubs->size(), RngSeed{s});
        CHECK(max_abs(wm.matrix.matrix() - choi(build_mub_map(k, mubs, rots)).matrix()) <= 1e-10);
        CHECK(wm.matrix.trace() == doctest::Approx(double(d)).epsilon(1e-12));
        CHECK(wm.frame_size == d + 1);
        REQUIRE(wm.rotation_seed.has_value());
        CHECK(wm.rotation_seed->value == s);
      }
    }
  }
}

TEST_CASE("k = 1 MUB witness has the entanglement-witness form") {
  for (int d : {3, 5}) {
    const MubCollection part = mub_prime(d).subset({0, 1, 2});
    const int L = part.size();
    const auto rots = mub_rotations(d, L, RngSeed{6});
    const WitnessOperator w = mub_witness(1, part, rots);
    CHECK(w.constant == doctest::Approx(1.0 / (d - 1)));
    ComplexMatrix expected = (double(d + L - 1) / (d * (d - 1.0))) * identity(d * d);
    for (int a = 0; a < L; ++a)
      for (int g = 0; g < d; ++g)
        for (int l = 0; l < d; ++l)
          expected -= (rots[a](g, l) / (d - 1.0)) * kron(ComplexMatrix(part.projectors[a][l].conjugate()),
                                                        part.projectors[a][g]);
    CHECK(max_abs(w.matrix.matrix() - expected) <= 1e-10);
  }
}

TEST_CASE("complete MUBs with identity rotations give an isotropic-type witness") {
  for (int d : {2, 3, 5}) {
    for (int k = 1; k <= d; ++k) {
      const double hc = std::sqrt(1.0 / ((d * k - 1.0) * (k * d + k - 2.0)));
      const WitnessOperator w = mub_witness(k, testing::test_mubs(d), RngSeed{0});
      CHECK(w.constant == doctest::Approx(hc).epsilon(1e-14));
      const ComplexMatrix expected = ((1.0 + hc) / d) * identity(d * d) - hc * max_entangled_kernel(d);
      CHECK(max_abs(w.matrix.matrix() - expected) <= 1e-10);
      // equivalently X -> Tr(X) I - p X with p = d h/(1 + h) <= 1/k
      CHECK(d * hc / (1.0 + hc) <= 1.0 / k + 1e-12);
    }
  }
}

TEST_CASE("values on the maximally entangled state") {
  for (int d : {2, 3, 4, 5}) {
    const DensityOperator phi = max_entangled_state(d);
    for (int k = 1; k <= d; ++k) {
      CAPTURE(d);
      CAPTURE(k);
      const double h = sic_map_constant(d, k);
      const double hc = mub_map_constant(d, k, d + 1);
      const double sic_value = evaluate(sic_witness(k, testing::test_sic(d), RngSeed{0}), phi);
      const double mub_value = evaluate(mub_witness(k, testing::test_mubs(d), RngSeed{0}), phi);
      CHECK(sic_value == doctest::Approx((d - h * (d - 1)) / (double(d) * d)).epsilon(1e-12));
      CHECK(mub_value == doctest::Approx((1.0 + hc) / d - hc * d).epsilon(1e-12));
      if (k < d) {
        CHECK(sic_value < 0.0);
        CHECK(mub_value < 0.0);
      }
    }
  }
  const DensityOperator phi3 = max_entangled_state(3);
  CHECK(evaluate(sic_witness(1, testing::test_sic(3), RngSeed{0}), phi3) ==
        doctest::Approx((3.0 - 2.0 * std::sqrt(27.0)) / 9.0).epsilon(1e-12));
  CHECK(evaluate(mub_witness(1, testing::test_mubs(3), RngSeed{0}), phi3) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(evaluate(mub_witness(2, testing::test_mubs(3), RngSeed{0}), phi3) ==
        doctest::Approx(-0.153531).epsilon(1e-5));
}

TEST_CASE("evaluate") {
  const WitnessOperator w = mub_witness(2, testing::test_mubs(3), RngSeed{0});
  // maximally mixed state: Tr(W)/d^2
  CHECK(evaluate(w, DensityOperator(identity(9) / 9.0)) == doctest::Approx(1.0 / 3.0));
  // linear in the isotropic parameter, crossing zero at p* = (1/3) / (1/3 - v)
  const double v = evaluate(w, max_entangled_state(3));
  const double pstar = (1.0 / 3.0) / (1.0 / 3.0 - v);
  CHECK(pstar == doctest::Approx((1.0 / 3.0) / (1.0 / 3.0 + 0.153531)).epsilon(1e-5));
  CHECK(evaluate(w, isotropic_state(3, pstar - 1e-6)) > 0.0);
  CHECK(evaluate(w, isotropic_state(3, pstar + 1e-6)) < 0.0);
  CHECK(std::abs(evaluate(w, isotropic_state(3, pstar))) <= 1e-12);
  CHECK_THROWS_AS(evaluate(w, identity(4) / 4.0), Error);
}

TEST_CASE("b constant") {
  const auto m3 = testing::test_mubs(3);
  CHECK(witness_b_constant(mub_witness(1, m3, RngSeed{0})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(witness_b_constant(mub_witness(2, m3, RngSeed{0})) == doctest::Approx(std::sqrt(8.0 / 30.0)).epsilon(1e-12));
  CHECK(mub_witness_b_closed_form(3, 2, 4) == doctest::Approx(std::sqrt(8.0 / 30.0)).epsilon(1e-14));
  for (int d : {2, 3, 5}) {
    const auto m = testing::test_mubs(d);
    for (int L = 1; L <= d + 1; ++L) {
      std::vector<int> which;
      for (int a = 0; a < L; ++a) which.push_back(a);
      const auto part = std::make_shared<const MubCollection>(m->subset(which));
      for (int k = 1; k <= d; ++k)
        for (std::uint64_t s = 0; s < 20; ++s)
          REQUIRE(std::abs(witness_b_constant(mub_witness(k, part, RngSeed{s})) -
                           mub_witness_b_closed_form(d, k, L)) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(witness_b_constant(sic_witness(1, testing::test_sic(2), RngSeed{0})), Error);
}

TEST_CASE("witnesses stay nonnegative on S_k draws") {
  for (int d : {2, 3}) {
    for (int k = 1; k < d; ++k) {
      const WitnessOperator ws = sic_witness(k, testing::test_sic(d), RngSeed{3});
      const WitnessOperator wm = mub_witness(k, testing::test_mubs(d), RngSeed{3});
      for (std::uint64_t s = 0; s < 300; ++s) {
        const SkSample sample = sample_sk_state(d, k, 3, RngSeed{s});
        REQUIRE(evaluate(ws, sample.state) >= -1e-9);
        REQUIRE(evaluate(wm, sample.state) >= -1e-9);
      }
      // extreme points: uniform Schmidt coefficients
      for (std::uint64_t s = 0; s < 100; ++s) {
        const auto psi = DensityOperator::from_pure(random_rank_k_pure(d, k, RngSeed{s}, SchmidtSpectrum::Uniform));
        REQUIRE(evaluate(ws, psi) >= -1e-9);
        REQUIRE(evaluate(wm, psi) >= -1e-9);
      }
    }
  }
}

TEST_CASE("witness JSON") {
  const WitnessOperator w = mub_witness(1, testing::test_mubs(2), RngSeed{5});
  const Json j = witness_to_json(w, true);
  CHECK(j["kind"] == "mub");
  CHECK(j["d"] == 2);
  CHECK(j["k"] == 1);
  CHECK(j["frame_size"] == 3);
  CHECK(j["rotation_seed"] == 5);
  CHECK(j["rotations"].size() == 3);
  CHECK(max_abs(complex_matrix_from_json(j["matrix"]) - w.matrix.matrix()) == 0.0);
  CHECK_FALSE(witness_to_json(w, false).contains("matrix"));
  const WitnessOperator s = sic_witness(1, testing::test_sic(2), sic_rotation(2, RngSeed{1}));
  CHECK_FALSE(witness_to_json(s, false).contains("rotation_seed"));
  CHECK(witness_to_json(s, false)["frame"]["kind"] == "sic");
}
