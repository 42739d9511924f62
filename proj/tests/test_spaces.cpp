#include <doctest.h>

#include <flexcross/spaces.hpp>

#include "support.hpp"

using namespace testing;

TEST_SUITE("spaces") {
  TEST_CASE("bilinear form signatures") {
    const Space H{Kind::hyperbolic, 2}, S{Kind::spherical, 2};
    CHECK(bilinear_form(H, vec({1, 0, 0}), vec({1, 0, 0})) == -1.0);
    CHECK(bilinear_form(S, vec({1, 0, 0}), vec({0, 1, 0})) == 0.0);
    CHECK(bilinear_form(H, vec({2, 1, 1}), vec({1, 1, 0})) == -1.0);
    CHECK(quadratic_form(H, vec({0, 3, 4})) == 25.0);
  }

  TEST_CASE("geodesic distance") {
    const Space S{Kind::spherical, 2}, H{Kind::hyperbolic, 2}, E{Kind::euclidean, 2};
    const Vec p = vec({1, 0, 0});
    CHECK(geodesic_distance(S, p, p) == 0.0);
    CHECK(geodesic_distance(S, p, vec({0, 1, 0})) == doctest::Approx(M_PI / 2).epsilon(1e-15));
    CHECK(geodesic_distance(H, p, vec({std::cosh(1.0), std::sinh(1.0), 0})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(geodesic_distance(E, vec({0, 0}), vec({3, 4})) == doctest::Approx(5.0));
    // tiny spherical distances do not lose precision to acos
    CHECK(geodesic_distance(S, p, vec({std::cos(1e-9), std::sin(1e-9), 0})) == doctest::Approx(1e-9).epsilon(1e-6));
  }

  TEST_CASE("projection to the model") {
    const Space S{Kind::spherical, 2}, H{Kind::hyperbolic, 2};
    CHECK((project_to_model(S, vec({0, 3, 4})) - vec({0, 0.6, 0.8})).norm() < 1e-15);
    CHECK((project_to_model(S, vec({0, 3, 4}), -1) - vec({0, -0.6, -0.8})).norm() < 1e-15);
    CHECK((project_to_model(H, vec({-2, 0, 0})) - vec({1, 0, 0})).norm() < 1e-15);
    CHECK_THROWS_AS(project_to_model(H, vec({0, 1, 0})), Error);
    CHECK(is_model_point(H, vec({std::cosh(2.0), 0, std::sinh(2.0)}), 1e-12));
  }

  TEST_CASE("tangent vectors and orthonormalization") {
    const Space H{Kind::hyperbolic, 3};
    const Vec x = project_to_model(H, vec({2, 0.3, -0.4, 0.5}));
    const Vec t = tangent_at(H, x, vec({0.1, 1, 2, 3}));
    CHECK(std::abs(bilinear_form(H, t, x)) < 1e-12);
    const auto basis = orthonormalize(H, {tangent_at(H, x, vec({0, 1, 0, 0})), tangent_at(H, x, vec({0, 0, 1, 0})),
                                          tangent_at(H, x, vec({0, 1, 1, 0}))});
    REQUIRE(basis.size() == 2);
    CHECK(bilinear_form(H, basis[0], basis[1]) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(quadratic_form(H, basis[1]) == doctest::Approx(1.0));
  }

  TEST_CASE("gram realization: orthonormal case") {
    const Space S{Kind::spherical, 3};
    Frame f = realize_gram(S, Mat::Identity(3, 3));
    Mat N(4, 3);
    for (int i = 0; i < 3; ++i) N.col(i) = f.normals[i];
    CHECK((N.transpose() * N - Mat::Identity(3, 3)).norm() < 1e-14);
    for (const Vec& n : f.normals) CHECK(std::abs(n.dot(f.axis)) < 1e-14);
    CHECK(f.axis.norm() == doctest::Approx(1.0));
    const auto c = dual_basis(S, f, Mat::Identity(3, 3));
    for (int i = 0; i < 3; ++i) CHECK((c[i] - f.normals[i]).norm() < 1e-14);
  }

  TEST_CASE("gram realization: degenerate euclidean and lorentzian") {
    Mat G(2, 2);
    G << 1, -1, -1, 1;
    Frame fe = realize_gram({Kind::euclidean, 2}, G);
    CHECK((fe.normals[0] + fe.normals[1]).norm() < 1e-12);
    CHECK(fe.normals[0].norm() == doctest::Approx(1.0));

    G << 1, -2, -2, 1;
    const Space H{Kind::hyperbolic, 2};
    Frame fh = realize_gram(H, G);
    CHECK(quadratic_form(H, fh.normals[0]) == doctest::Approx(1.0));
    CHECK(quadratic_form(H, fh.normals[1]) == doctest::Approx(1.0));
    CHECK(bilinear_form(H, fh.normals[0], fh.normals[1]) == doctest::Approx(-2.0));
  }

  TEST_CASE("dual basis of a 2x2 spherical gram matrix") {
    const double g = 0.3;
    Mat G(2, 2);
    G << 1, g, g, 1;
    const Space S{Kind::spherical, 2};
    Frame f = realize_gram(S, G);
    const auto c = dual_basis(S, f, G);
    CHECK((c[0] - (f.normals[0] - g * f.normals[1]) / (1 - g * g)).norm() < 1e-14);
    for (const Vec& ci : c) CHECK(std::abs(bilinear_form(S, ci, f.axis)) < 1e-14);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(bilinear_form(S, c[i], f.normals[j]) == doctest::Approx(i == j ? 1.0 : 0.0));
  }

  TEST_CASE("gram condition regimes") {
    CHECK(gram_condition_violation(Kind::spherical, Mat::Identity(3, 3)).empty());
    Mat G = Mat::Identity(2, 2);
    G(0, 1) = G(1, 0) = std::sqrt(1.5);  // det = -0.5
    CHECK_FALSE(gram_condition_violation(Kind::spherical, G).empty());
    CHECK(gram_condition_violation(Kind::hyperbolic, G).empty());
    CHECK_FALSE(gram_condition_violation(Kind::euclidean, G).empty());
  }

  TEST_CASE("random frames are realized faithfully") {
    for (Kind kind : all_kinds())
      for (int n : {2, 3, 4, 5})
        for (const SimplestTypeData& d : random_families(kind, n, 5, 11 * n)) {
          Frame f = realize_gram(d.space, d.G);
          for (int i = 0; i < n; ++i) {
            CHECK(std::abs(bilinear_form(d.space, f.normals[i], f.axis)) < 1e-10);
            for (int j = 0; j < n; ++j)
              CHECK(bilinear_form(d.space, f.normals[i], f.normals[j]) == doctest::Approx(d.G(i, j)).epsilon(1e-10));
          }
        }
  }
}
