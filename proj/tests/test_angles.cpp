#include <doctest.h>

#include <flexcross/angles.hpp>

#include "support.hpp"

using namespace testing;

namespace {

std::vector<FlexParam> samples(int count, std::uint64_t seed, bool include_flat = true) {
  Rng rng(seed);
  return sample_params(count, rng, include_flat);
}

}  // namespace

TEST_SUITE("angles") {
  TEST_CASE("canonical angles") {
    CHECK(canonical_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(canonical_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(canonical_angle(3 * M_PI / 2) == doctest::Approx(-M_PI / 2));
    CHECK(angle_distance(0.1, 0.1 + 2 * M_PI) < 1e-15);
  }

  TEST_CASE("ambient orientation sign") {
    SimplestTypeData d = identity_spherical_n3();
    CHECK(ambient_orientation_sign(d) == -1);
    d.s = {1, 1, 1};
    CHECK(ambient_orientation_sign(d) == 1);
    d.s[0] = -1;
    CHECK(ambient_orientation_sign(d) == -1);
  }

  TEST_CASE("X_k sets") {
    SimplestTypeData d = identity_spherical_n3();  // all products -1
    CHECK(X_set(d, 0) == 0b110);
    CHECK(X_set(d, 2) == 0);
    d.s_prime = {-1, -1, -1};  // all products +1
    CHECK(X_set(d, 0) == 0);
    CHECK(X_set(d, 2) == 0b011);
    for (int k = 0; k < 3; ++k) CHECK_FALSE(has(X_set(d, k), k));
  }

  TEST_CASE("lambda of a face") {
    const SimplestTypeData d = identity_spherical_n3();
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t rest = full_mask(3) & ~(1u << k);
      CHECK(lambda_face(d, FaceId{rest, 0}) == d.s[k] * d.lambda[k]);
      const double sign = (3 - 1 - k) % 2 ? -1.0 : 1.0;
      CHECK(lambda_face(d, FaceId{0, rest}) == sign * d.s[k] * d.lambda[k]);
    }
  }

  TEST_CASE("predicted angles at the flat positions") {
    SimplestTypeData d = identity_spherical_n3();
    d.s_prime = {1, -1, 1};  // products -1, +1, -1
    for (const FaceId& r : ridges(3)) {
      const int k = missing_index(3, r);
      CHECK(angle_distance(predicted_dihedral(d, r, FlexParam::finite(0)), d.product(k) == 1 ? 0.0 : M_PI) < 1e-15);
      if (d.product(k) == 1) CHECK(angle_distance(predicted_dihedral(d, r, FlexParam::inf()), M_PI) < 1e-15);
    }
  }

  TEST_CASE("measured angles follow the law") {
    for (Kind kind : all_kinds())
      for (int n : {2, 3, 4}) {
        if (n == 2 && kind != Kind::spherical) continue;
        for (const SimplestTypeData& d : random_families(kind, n, 3, 31 * n)) {
          FamilyPtr fam = build(d);
          for (const FlexParam& u : samples(12, n)) {
            const Configuration c = configuration(fam, u);
            for (const FaceId& r : ridges(n)) {
              const double psi = measured_dihedral(c, r);
              CHECK(angle_distance(psi, predicted_dihedral(d, r, u)) < 1e-8);
              CHECK(angle_distance(psi, measured_dihedral(c, r, true)) < 1e-12);
            }
            CHECK(sign_law_residual(c) < 1e-8);
          }
        }
      }
  }

  TEST_CASE("flat positions give 0 or π") {
    for (const SimplestTypeData& d : random_families(Kind::hyperbolic, 3, 3, 8)) {
      const Configuration c = configuration(build(d), FlexParam::finite(0));
      for (const FaceId& r : ridges(3)) {
        const int k = missing_index(3, r);
        CHECK(angle_distance(measured_dihedral(c, r), d.product(k) == 1 ? 0.0 : M_PI) < 1e-8);
      }
    }
  }

  TEST_CASE("quadrangle angle law is not asserted in the flat and hyperbolic plane") {
    const SimplestTypeData d = random_families(Kind::euclidean, 2, 1, 3)[0];
    CHECK_THROWS_AS(predicted_dihedral(d, ridges(2)[0], FlexParam::finite(1)), Error);
  }

  TEST_CASE("vertex links are rigid quadrangles of the expected type") {
    for (Kind kind : all_kinds())
      for (const SimplestTypeData& d : random_families(kind, 3, 3, 55)) {
        FamilyPtr fam = build(d);
        const auto us = samples(16, 9, false);  // tan(ψ/2) is singular at the flat positions
        for (const FaceId& v : faces(3, 0)) {
          const LinkPolytope L0 = link_of_face(configuration(fam, us[2]), v);
          CHECK(L0.vertex_ids.size() == 4);
          CHECK(L0.faces.size() == 4);
          for (const FlexParam& u : us) {
            const LinkPolytope L = link_of_face(configuration(fam, u), v);
            for (size_t i = 0; i < 4; ++i)
              for (size_t j = 0; j < 4; ++j) {
                if (L.vertex_ids[i] % 3 == L.vertex_ids[j] % 3) continue;  // diagonals flex
                const double a = bilinear_form(d.space, L.directions[i], L.directions[j]);
                const double b = bilinear_form(d.space, L0.directions[i], L0.directions[j]);
                CHECK(std::abs(a - b) < 1e-9);
              }
          }
          const QuadrangleClassification q = classify_link_quadrangle(fam, v, us);
          auto [k, l] = missing_pair(3, v);
          if (d.product(k) == d.product(l))
            CHECK(q.type == QuadrangleType::supplementary);
          else
            CHECK(q.type != QuadrangleType::supplementary);
          CHECK(q.constant_spread < 1e-8);
        }
      }
  }
}
