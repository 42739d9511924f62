#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flexcross/combinatorics.hpp"
#include "flexcross/spaces.hpp"

namespace flexcross {

struct SimplestTypeData {
  Space space;
  Mat G;
  Vec lambda;
  std::vector<int> s;
  std::vector<int> s_prime;

  int n() const { return space.n; }
  int product(int i) const { return s[i] * s_prime[i]; }
};

// Extended real parameter u in R ∪ {∞}.  -∞ and +∞ are the same point.
struct FlexParam {
  double value = 0.0;
  bool infinite = false;

  static FlexParam finite(double u) { return {u, false}; }
  static FlexParam inf() { return {0.0, true}; }
  FlexParam inverse() const;
  std::string str() const;
  bool operator==(const FlexParam& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
};

// Coefficients (2λ²u²/(λ²u²+1), 2λu/(λ²u²+1)); exactly (2, 0) at u = ∞.
std::pair<double, double> flex_coefficients(double lambda, const FlexParam& u);

struct EuclideanBase {
  std::vector<Vec> vertices;  // a_1..a_n in the hyperplane x_0 = 0
  Vec altitudes;              // signed altitudes a_i (lengths)
  Vec coefficients;           // b_i
};

struct FlexFamily {
  SimplestTypeData data;
  Frame frame;
  Mat H;
  std::optional<EuclideanBase> euclidean_base;
  // Sign of the ambient orientation making [a_1..a_n] positively oriented with
  // m pointing into it.
  int omega = 1;
};

using FamilyPtr = std::shared_ptr<const FlexFamily>;

struct Configuration {
  Space space;
  std::vector<Vec> a;
  std::vector<Vec> b;
  FlexParam u;
  FamilyPtr family;  // may be null for ad-hoc configurations
  Vec axis;          // the m used for flatness / orientation
  int omega = 1;

  int n() const { return space.n; }
  // a_i -> id i, b_i -> id n + i
  const Vec& vertex(int id) const { return id < n() ? a[id] : b[id - n()]; }
  std::vector<Vec> vertices(const FaceId& f) const;
};

// Empty string when valid, otherwise the first violated condition.
std::string validate_data(const SimplestTypeData& data);

Mat h_matrix(const Mat& G, const Vec& lambda);

struct BuildOptions {
  // Reuse a realized frame (normals and axis) instead of realizing G afresh.
  const Frame* frame = nullptr;
  // When false, sign rows are not checked against the geometry.
  bool check_signs = true;
  Tolerances tol{};
};

FamilyPtr build(const SimplestTypeData& data, const BuildOptions& opt = {});

Vec d_vector(const FlexFamily& family, int i, const FlexParam& u);

Configuration configuration(const FamilyPtr& family, const FlexParam& u);

std::map<FaceId, double> edge_length_table(const Configuration& config);

// Duality: λ_i -> 1/λ_i, s' -> -s', indices reversed.  perm[i] is
// the original index stored at new position i.
struct DualData {
  SimplestTypeData data;
  std::vector<int> perm;
};
DualData dual_family(const SimplestTypeData& data);

// Realization of the dual family sharing the original's frame (with m -> -m),
// so that configurations coincide literally under perm.
FamilyPtr build_dual(const FlexFamily& family, const DualData& dual);

// Worst vertex disagreement between P_u and the dual family at 1/u under the
// recorded permutation.  Euclidean bases are normalized independently, so the
// euclidean comparison first fits a common scale and translation.
double duality_residual(const FamilyPtr& family, const std::vector<FlexParam>& samples);

// Sign rows forced by the geometry of (G, λ) for euclidean/hyperbolic data,
// up to the global flip (s, s') -> (-s, -s').  Spherical data admits every row.
std::optional<std::pair<std::vector<int>, std::vector<int>>> derive_signs(Kind kind, const Mat& G,
                                                                          const Vec& lambda);

// Simultaneous sign change (s, s') -> (-s, -s'); describes the same polytope.
SimplestTypeData flip_all_signs(const SimplestTypeData& data);

// Orientation sign of the ordered tangent frame `vecs` at x.
int orientation_sign(const Configuration& config, const Vec& x, const std::vector<Vec>& vecs);

}  // namespace flexcross
