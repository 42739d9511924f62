#include <doctest.h>

#include <set>

#include <flexcross/combinatorics.hpp>

using namespace flexcross;

TEST_SUITE("combinatorics") {
  TEST_CASE("face counts") {
    CHECK(facets(3).size() == 8);
    CHECK(faces(3, 1).size() == 12);
    CHECK(faces(3, 0).size() == 6);
    const auto empty = faces(2, -1);
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].empty());
    for (int n = 2; n <= 6; ++n) {
      CHECK(facets(n).size() == (1u << n));
      CHECK(ridges(n).size() == static_cast<size_t>(n) * (1u << (n - 1)));
    }
  }

  TEST_CASE("orientation sign and coherence") {
    CHECK(facet_orientation_sign(3, 0b111, 0) == 1);
    CHECK(facet_orientation_sign(3, 0b110, 0b001) == -1);
    for (int n = 2; n <= 7; ++n) CHECK(orientation_is_coherent(n));
  }

  TEST_CASE("quadrangle edges alternate around the cycle") {
    // a1 -> a2 -> b1 -> b2 -> a1 in K_2: consecutive edges induce opposite signs on the shared vertex
    const int n = 2;
    for (const FaceId& v : faces(n, 0)) {
      std::vector<int> signs;
      for (const FaceId& e : facets(n))
        if (e.contains(v)) signs.push_back(induced_orientation(n, e, v));
      REQUIRE(signs.size() == 2);
      CHECK(signs[0] == -signs[1]);
    }
  }

  TEST_CASE("shared faces") {
    const FaceId a{0b11, 0}, b{0b01, 0b10};
    CHECK(shared_face(a, b) == FaceId{0b01, 0});
    CHECK(shared_face(FaceId{0b111, 0}, FaceId{0, 0b111}).empty());
    CHECK(shared_face(a, a) == a);
  }

  TEST_CASE("missing indices") {
    const int n = 4;
    for (const FaceId& r : ridges(n)) {
      const int k = missing_index(n, r);
      CHECK_FALSE(has(r.I | r.J, k));
    }
    for (const FaceId& g : faces(n, n - 3)) {
      auto [k, l] = missing_pair(n, g);
      CHECK(k < l);
      CHECK_FALSE(has(g.I | g.J, k));
      CHECK_FALSE(has(g.I | g.J, l));
    }
  }

  TEST_CASE("facets of P_(k)") {
    const int n = 4;
    for (int k = 0; k < n; ++k) {
      const auto fs = facets_without(n, k);
      CHECK(fs.size() == (1u << (n - 1)));
      std::set<FaceId> uniq(fs.begin(), fs.end());
      CHECK(uniq.size() == fs.size());
      for (const FaceId& f : fs) CHECK_FALSE(has(f.I | f.J, k));
    }
  }

  TEST_CASE("labels and vertex ids") {
    const FaceId f{0b101, 0b010};
    CHECK(f.vertex_ids(3) == std::vector<int>{0, 4, 2});
    CHECK(f.size() == 3);
    CHECK(f.valid());
    CHECK_FALSE(FaceId{1, 1}.valid());
  }
}
