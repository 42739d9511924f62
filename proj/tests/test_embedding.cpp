#include <doctest.h>

#include <flexcross/embedding.hpp>
#include <flexcross/lp.hpp>
#include <flexcross/measure.hpp>

#include "support.hpp"

using namespace testing;

namespace {

std::vector<Vec> octa_vertices(const FaceId& f) {
  std::vector<Vec> v;
  for (int id : f.vertex_ids(3)) v.push_back((id < 3 ? 1.0 : -1.0) * Vec::Unit(3, id % 3));
  return v;
}

Configuration regular_octahedron() {
  Configuration c;
  c.space = {Kind::euclidean, 3};
  for (int i = 0; i < 3; ++i) {
    c.a.push_back(Vec::Unit(3, i));
    c.b.push_back(-Vec::Unit(3, i));
  }
  c.axis = Vec::Unit(3, 0);
  return c;
}

}  // namespace

TEST_SUITE("embedding") {
  TEST_CASE("linear programming") {
    // minimize -x - y subject to x + y + s = 1
    Mat A(1, 3);
    A << 1, 1, 1;
    Vec b = vec({1});
    LpResult r = solve_lp(A, b, vec({-1, -1, 0}));
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(-1));
    A << 1, 1, 0;
    r = solve_lp(A, vec({-1}), vec({0, 0, 0}));
    CHECK(r.status == LpStatus::infeasible);
    Mat A2(1, 2);
    A2 << 1, -1;
    r = solve_lp(A2, vec({0}), vec({-1, 0}));
    CHECK(r.status == LpStatus::unbounded);
  }

  TEST_CASE("simplex pairs of a regular octahedron") {
    const Space E{Kind::euclidean, 3};
    const FaceId f1{0b111, 0}, f2{0b011, 0b100}, f3{0, 0b111};
    CHECK(simplex_pair_relation(E, octa_vertices(f1), f1.vertex_ids(3), octa_vertices(f2), f2.vertex_ids(3)).tag ==
          RelationTag::shared_face);
    CHECK(simplex_pair_relation(E, octa_vertices(f1), f1.vertex_ids(3), octa_vertices(f3), f3.vertex_ids(3)).tag ==
          RelationTag::disjoint);
    // two coincident simplices under different labels
    const IntersectionRelation same =
        simplex_pair_relation(E, octa_vertices(f1), {10, 11, 12}, octa_vertices(f1), {20, 21, 22});
    CHECK(same.tag == RelationTag::improper);
    REQUIRE(same.witness);
  }

  TEST_CASE("crossing and touching triangles") {
    const Space E{Kind::euclidean, 3};
    const std::vector<Vec> t1{vec({0, 0, 0}), vec({2, 0, 0}), vec({0, 2, 0})};
    const std::vector<Vec> cross{vec({0.5, 0.5, -1}), vec({0.5, 0.5, 1}), vec({3, 3, 0})};
    const std::vector<Vec> far{vec({5, 5, -1}), vec({5, 5, 1}), vec({6, 6, 0})};
    CHECK(simplex_pair_relation(E, t1, {0, 1, 2}, cross, {3, 4, 5}).tag == RelationTag::improper);
    CHECK(simplex_pair_relation(E, t1, {0, 1, 2}, far, {3, 4, 5}).tag == RelationTag::disjoint);
    // sharing one vertex and folding back through the first triangle
    const std::vector<Vec> fold{vec({0, 0, 0}), vec({1, 0.5, -1}), vec({1, 0.5, 1})};
    CHECK(simplex_pair_relation(E, t1, {0, 1, 2}, fold, {0, 4, 5}).tag == RelationTag::improper);
  }

  TEST_CASE("regular octahedron is embedded") { CHECK(is_embedded(regular_octahedron()).verdict == EmbedVerdict::embedded); }

  TEST_CASE("degrees of the flat positions") {
    Rng rng(4);
    for (int n : {2, 3, 4}) {
      for (const SimplestTypeData& d : random_families(Kind::spherical, n, 2, n, with_products(n, -1))) {
        CHECK(spherical_degree(configuration(build(d), FlexParam::finite(0)), rng) == 1);
        for (int i = 0; i < n; ++i)
          CHECK(spherical_degree(configuration(build(antipode_flip(d, n + i)), FlexParam::finite(0)), rng) == 0);
      }
      for (const SimplestTypeData& d : random_families(Kind::spherical, n, 2, n, with_products(n, 1)))
        CHECK(spherical_degree(configuration(build(d), FlexParam::inf()), rng) == 1);
    }
  }

  TEST_CASE("small flexions of the all-minus pattern are embedded, the far flat position is not") {
    for (int n : {2, 3, 4})
      for (const SimplestTypeData& d : random_families(Kind::spherical, n, 2, 40 + n, with_products(n, -1))) {
        FamilyPtr fam = build(d);
        CHECK(is_embedded(configuration(fam, FlexParam::finite(1e-3))).verdict == EmbedVerdict::embedded);
        if (n >= 3) {
          const EmbeddingResult e = is_embedded(configuration(fam, FlexParam::inf()));
          CHECK(e.verdict == EmbedVerdict::self_intersecting);
          CHECK(e.witness.has_value());
        }
      }
  }

  TEST_CASE("hemispheres and rho") {
    const FamilyPtr fam = build(identity_data(3, {1, 3, 9}));
    const Vec m = fam->frame.axis;
    CHECK(hemisphere_position(configuration(fam, FlexParam::finite(0)), m) == Hemisphere::equatorial);
    CHECK(hemisphere_position(configuration(fam, FlexParam::finite(0.4)), m) == Hemisphere::closed_positive);
    CHECK(rho(fam, FlexParam::finite(0)) == doctest::Approx(0.0).scale(1));
    CHECK(rho(fam, FlexParam::inf()) < 1e-12);
    CHECK(rho(fam, FlexParam::finite(0.5)) > 0);
    const RotatedFamily rf = make_rotated_family(fam);
    CHECK(hemisphere_position(rotated_configuration(rf, FlexParam::finite(0.4)), m) == Hemisphere::strictly_positive);
    CHECK(hemisphere_position(rotated_configuration(rf, FlexParam::finite(-0.4)), m) == Hemisphere::strictly_negative);
  }

  TEST_CASE("rotated family") {
    const FamilyPtr fam = build(identity_data(3, {1, 3, 9}));
    const RotatedFamily rf = make_rotated_family(fam);
    for (const FlexParam& u : {FlexParam::finite(0), FlexParam::inf()}) {
      const Configuration a = configuration(fam, u), b = rotated_configuration(rf, u);
      for (int id = 0; id < 6; ++id) CHECK((a.vertex(id) - b.vertex(id)).norm() < 1e-12);
    }
    for (double u : {0.05, -0.3, 2.0}) {
      const FlexParam p = FlexParam::finite(u);
      const Configuration a = configuration(fam, p), b = rotated_configuration(rf, p);
      double worst = 0;
      for (int id = 0; id < 6; ++id) worst = std::max(worst, geodesic_distance(a.space, a.vertex(id), b.vertex(id)));
      CHECK(worst <= rho(fam, p) / 2 + 1e-10);
    }
  }

  TEST_CASE("embedding certificate") {
    Rng rng(3);
    for (int n : {2, 3, 4}) {
      const SimplestTypeData d = random_families(Kind::spherical, n, 1, 500 + n, with_products(n, -1))[0];
      SimplestTypeData t = d;
      for (int i = 0; i < n; ++i) {
        t.s[i] = -1;
        t.s_prime[i] = 1;
      }
      const EmbeddingCertificate cert = embedding_certificate(make_rotated_family(build(t)), rng);
      for (const CertificateItem& it : cert.items) {
        CAPTURE(it.name);
        CAPTURE(it.detail);
        CHECK(it.pass);
      }
      CHECK(cert.delta > 0);
    }
  }

  TEST_CASE("identity-gram family vertex bounds") {
    const VertexBounds vb = identity_family_bounds(build(identity_data(3, {1, 7, 49})));
    CHECK(vb.bound == doctest::Approx(std::asin(1 / std::sqrt(3.0))));
    CHECK(vb.pass());
  }
}
