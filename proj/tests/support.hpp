#pragma once

#include <cmath>
#include <vector>

#include <flexcross/generate.hpp>

namespace testing {

using namespace flexcross;

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline std::vector<SimplestTypeData> random_families(Kind kind, int n, int count, std::uint64_t seed,
                                                     const GeneratorOptions& opt = {}) {
  Rng rng(seed);
  std::vector<SimplestTypeData> out;
  for (int i = 0; i < count; ++i) out.push_back(flexcross::random_data(kind, n, rng, opt));
  return out;
}

inline GeneratorOptions with_products(int n, int p) {
  GeneratorOptions o;
  o.products.assign(n, p);
  return o;
}

inline const std::vector<Kind>& all_kinds() {
  static const std::vector<Kind> k{Kind::euclidean, Kind::spherical, Kind::hyperbolic};
  return k;
}

inline SimplestTypeData identity_spherical_n3() {
  SimplestTypeData d;
  d.space = {Kind::spherical, 3};
  d.G = Mat::Identity(3, 3);
  d.lambda = vec({1, 2, 4});
  d.s = {-1, -1, -1};
  d.s_prime = {1, 1, 1};
  return d;
}

}  // namespace testing
