#include <doctest.h>

#include <flexcross/measure.hpp>

#include "support.hpp"

using namespace testing;

namespace {

Configuration adhoc(const Space& sp, std::vector<Vec> a, std::vector<Vec> b, Vec axis) {
  Configuration c;
  c.space = sp;
  c.a = std::move(a);
  c.b = std::move(b);
  c.axis = std::move(axis);
  return c;
}

Configuration regular_octahedron(double scale, const Vec& shift) {
  std::vector<Vec> a, b;
  for (int i = 0; i < 3; ++i) {
    a.push_back(scale * Vec::Unit(3, i) + shift);
    b.push_back(-scale * Vec::Unit(3, i) + shift);
  }
  return adhoc({Kind::euclidean, 3}, a, b, Vec::Unit(3, 0));
}

// Monte Carlo estimate of ∫κ dV: uniform on S^n, or uniform in a Klein ball with
// the hyperbolic density.
std::pair<double, double> monte_carlo_volume(const Configuration& c, int samples, Rng& rng) {
  const Space& sp = c.space;
  const int n = sp.n;
  std::normal_distribution<double> N(0, 1);
  std::uniform_real_distribution<double> U(0, 1);
  double R = 0;
  if (sp.kind == Kind::hyperbolic)
    for (int id = 0; id < 2 * n; ++id) R = std::max(R, (c.vertex(id).tail(n) / c.vertex(id)[0]).norm());
  R = std::min(1.0, R * 1.05);
  const double ball = std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1) * std::pow(R, n);
  const std::optional<Vec> base = sp.kind == Kind::spherical ? std::optional<Vec>(-c.axis) : std::nullopt;
  double sum = 0, sum2 = 0;
  for (int s = 0; s < samples; ++s) {
    Vec g(n);
    for (int i = 0; i < n; ++i) g[i] = N(rng);
    double w;
    Vec x;
    if (sp.kind == Kind::spherical) {
      Vec y(n + 1);
      for (int i = 0; i <= n; ++i) y[i] = N(rng);
      x = y.normalized();
      w = sphere_volume(n);
    } else {
      const Vec p = g.normalized() * R * std::pow(U(rng), 1.0 / n);
      x = Vec(n + 1);
      x[0] = 1;
      x.tail(n) = p;
      x /= std::sqrt(1 - p.squaredNorm());
      w = ball * std::pow(1 - p.squaredNorm(), -(n + 1) / 2.0);
    }
    const double v = w * winding_number(c, x, base, rng);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / samples;
  return {mean, std::sqrt((sum2 / samples - mean * mean) / samples)};
}

}  // namespace

TEST_SUITE("measure") {
  TEST_CASE("sphere volumes") {
    CHECK(sphere_volume(0) == 2.0);
    CHECK(sphere_volume(1) == doctest::Approx(2 * M_PI).epsilon(1e-15));
    CHECK(sphere_volume(2) == doctest::Approx(4 * M_PI).epsilon(1e-15));
    CHECK(sphere_volume(3) == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-15));
    CHECK(sphere_volume(4) == doctest::Approx(8 * M_PI * M_PI / 3).epsilon(1e-14));
  }

  TEST_CASE("circular volume distance") {
    CHECK(volume_distance(0.1, 9.9, 10.0) == doctest::Approx(0.2));
    CHECK(volume_distance(0.1, 9.9, std::nullopt) == doctest::Approx(9.8));
    CHECK(reduce_mod(-1.0, 10.0) == doctest::Approx(9.0));
  }

  TEST_CASE("simplex volumes against exact values") {
    const Space S2{Kind::spherical, 2}, S3{Kind::spherical, 3}, E2{Kind::euclidean, 2};
    CHECK(simplex_volume(S2, {Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 2)}).value ==
          doctest::Approx(M_PI / 2).epsilon(1e-14));
    CHECK(simplex_volume(E2, {vec({0, 0}), vec({1, 0}), vec({0, 1})}).value == doctest::Approx(0.5));
    const VolumeEstimate orthant =
        simplex_volume(S3, {Vec::Unit(4, 0), Vec::Unit(4, 1), Vec::Unit(4, 2), Vec::Unit(4, 3)});
    CHECK(std::abs(orthant.value - M_PI * M_PI / 8) < 1e-10);
    CHECK(simplex_volume(S2, {Vec::Unit(3, 0), Vec::Unit(3, 1)}).value == doctest::Approx(M_PI / 2));
    CHECK(simplex_volume(S2, {Vec::Unit(3, 0)}).value == 1.0);
  }

  TEST_CASE("curved tetrahedra against independent cubature") {
    // values from adaptive cubature of the chart densities over the straight simplices
    const Space H3{Kind::hyperbolic, 3}, S3{Kind::spherical, 3};
    auto klein = [](const Vec& p) {
      Vec x(4);
      x[0] = 1;
      x.tail(3) = p;
      return Vec(x / std::sqrt(1 - p.squaredNorm()));
    };
    const VolumeEstimate h = simplex_volume(
        H3, {klein(vec({0, 0, 0})), klein(vec({0.5, 0, 0})), klein(vec({0, 0.5, 0})), klein(vec({0, 0, 0.5}))});
    CHECK(std::abs(h.value - 0.024483346319452204) < 1e-10);
    const double r = 1 / std::sqrt(2.0);
    const VolumeEstimate s = simplex_volume(
        S3, {Vec::Unit(4, 0), vec({r, r, 0, 0}), vec({r, 0, r, 0}), vec({r, 0, 0, r})});
    CHECK(std::abs(s.value - 0.10280837917801416) < 1e-10);
  }

  TEST_CASE("face volumes are rigid") {
    for (Kind kind : all_kinds())
      for (const SimplestTypeData& d : random_families(kind, 3, 2, 5)) {
        FamilyPtr fam = build(d);
        FaceVolumeCache cache(fam);
        for (double u : {0.2, -3.0}) {
          const Configuration c = configuration(fam, FlexParam::finite(u));
          for (int dim = 0; dim <= 2; ++dim)
            for (const FaceId& f : faces(3, dim)) {
              const double v = face_volume(c, f).value;
              CHECK(v == doctest::Approx(cache.get(f).value).epsilon(1e-9));
              if (dim == 0) CHECK(v == 1.0);
            }
        }
        const Configuration c = configuration(fam, FlexParam::finite(0.2));
        CHECK(cache.get(FaceId{full_mask(3), 0}).value == doctest::Approx(simplex_volume(d.space, c.a).value));
      }
  }

  TEST_CASE("winding numbers of a regular octahedron") {
    Rng rng(1);
    const Configuration c = regular_octahedron(1.0, Vec::Zero(3));
    CHECK(std::abs(winding_number(c, vec({0.1, 0.05, -0.02}), std::nullopt, rng)) == 1);
    CHECK(winding_number(c, vec({5, 5, 5}), std::nullopt, rng) == 0);
    CHECK(winding_number(c, vec({0.9, 0.9, 0.9}), std::nullopt, rng) == 0);
  }

  TEST_CASE("spherical winding relative to a base point") {
    Rng rng(2);
    SimplestTypeData d = identity_spherical_n3();
    const Configuration c = configuration(build(d), FlexParam::finite(1e-2));
    // base and x next to each other far from every facet
    Vec base = -c.axis;
    Vec x = project_to_model(c.space, base + 1e-3 * Vec::Unit(4, 1));
    CHECK(winding_number(c, x, base, rng) == 0);
  }

  TEST_CASE("generalized volume at flat positions") {
    for (Kind kind : {Kind::euclidean, Kind::hyperbolic})
      for (const SimplestTypeData& d : random_families(kind, 3, 2, 12)) {
        FamilyPtr fam = build(d);
        for (const FlexParam& u : {FlexParam::finite(0), FlexParam::inf()})
          CHECK(std::abs(generalized_volume(configuration(fam, u)).value) < 1e-9);
      }
    for (const SimplestTypeData& d : random_families(Kind::spherical, 3, 2, 12, with_products(3, -1))) {
      const GeneralizedVolume g = generalized_volume(configuration(build(d), FlexParam::finite(0)));
      CHECK(volume_distance(g.value, sphere_volume(3) / 2, sphere_volume(3)) < 1e-8);
    }
  }

  TEST_CASE("generalized volume agrees with a Monte Carlo oracle") {
    Rng rng(2024);
    for (Kind kind : {Kind::spherical, Kind::hyperbolic}) {
      const SimplestTypeData d = random_families(kind, 3, 1, 77)[0];
      const Configuration c = configuration(build(d), FlexParam::finite(0.8));
      const GeneralizedVolume g = generalized_volume(c);
      auto [mean, se] = monte_carlo_volume(c, 20000, rng);
      const std::optional<double> mod = kind == Kind::spherical ? std::optional<double>(sphere_volume(3)) : std::nullopt;
      CAPTURE(mean);
      CAPTURE(se);
      CAPTURE(g.value);
      CHECK(volume_distance(mean, g.value, mod) <= 3 * se + 1e-9);
    }
  }

  TEST_CASE("three volume routes agree") {
    for (Kind kind : {Kind::spherical, Kind::hyperbolic})
      for (const SimplestTypeData& d : random_families(kind, 3, 3, 91)) {
        FamilyPtr fam = build(d);
        FaceVolumeCache cache(fam);
        const std::optional<double> mod = kind == Kind::spherical ? std::optional<double>(sphere_volume(3)) : std::nullopt;
        for (double u : {0.0, 0.4, -1.5, 6.0}) {
          const FlexParam p = FlexParam::finite(u);
          const GeneralizedVolume cf = closed_form_volume(d, p), sch = schlafli_volume(cache, p);
          const GeneralizedVolume dec = generalized_volume(configuration(fam, p));
          CHECK(volume_distance(cf.value, sch.value, mod) < 1e-8 * sphere_volume(3));
          CHECK(volume_distance(cf.value, dec.value, mod) < dec.abs_error + 1e-6);
          if (kind == Kind::hyperbolic) CHECK(std::abs(cf.value) < 1e-12);
        }
      }
  }

  TEST_CASE("closed forms for the sign patterns") {
    const double sig = sphere_volume(3);
    SimplestTypeData d = identity_spherical_n3();  // all products -1
    const GeneralizedVolume v = closed_form_volume(d, FlexParam::finite(1));
    CHECK(volume_distance(v.value, sig / 2 + d.s[2] * sig / M_PI * std::atan(d.lambda[2]), sig) < 1e-12);
    d.s_prime = {-1, -1, -1};  // all products +1
    CHECK(volume_distance(closed_form_volume(d, FlexParam::finite(0.5)).value,
                          d.s[0] * sig / M_PI * std::atan(0.5 * d.lambda[0]), sig) < 1e-12);
    d.s_prime = {-1, 1, 1};  // products +1, -1, -1: split after k = 1
    CHECK(volume_distance(closed_form_volume(d, FlexParam::inf()).value, sig / 2 * (d.s[0] + d.s[1]), sig) < 1e-12);
    d.s_prime = {-1, 1, -1};  // products +1, -1, +1: every X_k non-empty
    for (double u : {0.1, 2.0}) CHECK(volume_distance(closed_form_volume(d, FlexParam::finite(u)).value, 0, sig) < 1e-12);
  }

  TEST_CASE("facet relations") {
    for (Kind kind : all_kinds())
      for (int n : {3, 4})
        for (const SimplestTypeData& d : random_families(kind, n, 2, 300 + n)) {
          FaceVolumeCache cache(build(d));
          for (YSet y : {YSet::plus, YSet::minus}) {
            const RelationResidual r = facet_relation_residual(cache, y);
            CHECK(r.residual < (n == 3 ? 1e-9 : 1e-4));
          }
          for (int k = 0; k < n; ++k) CHECK(codim2_relation_residual(cache, k).residual < 1e-9);
          if (kind != Kind::spherical) {
            CHECK(y_set(d, YSet::plus) != 0);
            CHECK(y_set(d, YSet::minus) != 0);
          }
        }
    // quadrangles in S^2: vertex counts with σ_0 = 2
    for (const SimplestTypeData& d : random_families(Kind::spherical, 2, 4, 5)) {
      FaceVolumeCache cache(build(d));
      for (int k = 0; k < 2; ++k) CHECK(codim2_relation_residual(cache, k).residual < 1e-12);
    }
    // Y = ∅: the plain facet sum equals σ_{n-1}
    const SimplestTypeData d = random_families(Kind::spherical, 3, 1, 8, with_products(3, -1))[0];
    FaceVolumeCache cache(build(d));
    const YSet empty = y_set(d, YSet::plus) == 0 ? YSet::plus : YSet::minus;
    REQUIRE(y_set(d, empty) == 0);
    const RelationResidual r = facet_relation_residual(cache, empty);
    CHECK(r.rhs == doctest::Approx(sphere_volume(2)));
    CHECK(r.residual < 1e-9);
  }

  TEST_CASE("antipodal flips") {
    const SimplestTypeData d = random_families(Kind::spherical, 3, 1, 21)[0];
    for (int id = 0; id < 6; ++id) {
      const SimplestTypeData twice = antipode_flip(antipode_flip(d, id), id);
      CHECK(twice.s == d.s);
      CHECK(twice.s_prime == d.s_prime);
      const Configuration c = configuration(build(d), FlexParam::finite(0.6));
      const Configuration f = configuration(build(antipode_flip(d, id)), FlexParam::finite(0.6));
      for (int j = 0; j < 6; ++j) CHECK((f.vertex(j) - (j == id ? -1.0 : 1.0) * c.vertex(j)).norm() < 1e-12);
    }
    const SimplestTypeData ab = antipode_flip(antipode_flip(d, 0), 4), ba = antipode_flip(antipode_flip(d, 4), 0);
    CHECK(ab.s == ba.s);
    CHECK(ab.s_prime == ba.s_prime);
    CHECK_THROWS_AS(antipode_flip(random_families(Kind::hyperbolic, 3, 1, 1)[0], 0), Error);
  }

  TEST_CASE("modified bellows witness") {
    SimplestTypeData d = identity_spherical_n3();
    CHECK(modified_bellows_witness(d) == std::vector<int>{3});
    d.s_prime[0] = -1;
    CHECK(modified_bellows_witness(d).empty());
    for (const SimplestTypeData& r : random_families(Kind::spherical, 3, 3, 64)) {
      SimplestTypeData f = r;
      for (int id : modified_bellows_witness(r)) f = antipode_flip(f, id);
      FaceVolumeCache cache(build(f));
      const GeneralizedVolume v0 = schlafli_volume(cache, FlexParam::finite(0));
      for (double u : {0.3, -2.0, 10.0})
        CHECK(volume_distance(schlafli_volume(cache, FlexParam::finite(u)).value, v0.value, v0.modulus) <
              1e-8 * sphere_volume(3));
    }
  }
}
