#include "flexcross/angles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace flexcross {

double canonical_angle(double x) {
  double r = std::remainder(x, 2.0 * M_PI);  // [-π, π]
  if (r <= -M_PI) r += 2.0 * M_PI;
  return r;
}

double angle_distance(double x, double y) { return std::abs(canonical_angle(x - y)); }

int ambient_orientation_sign(const SimplestTypeData& data) {
  int p = 1;
  for (int v : data.s) p *= v;
  return p;
}

Vec barycenter(const Space& space, const std::vector<Vec>& pts) {
  Vec s = Vec::Zero(space.dim());
  for (const Vec& p : pts) s += p;
  s /= static_cast<double>(pts.size());
  if (space.kind == Kind::euclidean) return s;
  return project_to_model(space, s, 1);
}

namespace {

struct FacetNormals {
  Vec exterior;  // unit, tangent at x, orthogonal to the facet
  Vec interior;  // unit, tangent at x, inside the facet, orthogonal to the ridge
};

FacetNormals facet_normals(const Configuration& c, const Vec& x, const std::vector<Vec>& ridge_tangents,
                           const FaceId& facet, int opposite_id) {
  const Space& sp = c.space;
  const int n = c.n();
  std::vector<Vec> W = c.vertices(facet);
  std::vector<Vec> T;
  for (int j = 1; j < n; ++j) T.push_back(tangent_at(sp, x, W[j] - W[0]));

  std::vector<Vec> span = ridge_tangents;
  span.push_back(tangent_at(sp, x, c.vertex(opposite_id) - x));
  std::vector<Vec> basis = orthonormalize(sp, span);
  if (static_cast<int>(basis.size()) != n - 1)
    throw Error(ErrorCode::degeneracy, "degenerate facet " + facet.label(n));
  std::vector<Vec> constraints = basis;
  if (sp.curved()) constraints.push_back(x);
  std::vector<Vec> comp = orthogonal_complement(sp, constraints);
  if (comp.size() != 1) throw Error(ErrorCode::degeneracy, "facet normal is not unique at " + facet.label(n));
  Vec mm = comp[0];
  mm /= std::sqrt(quadratic_form(sp, mm));
  const int eps = facet_orientation_sign(n, facet.I, facet.J);
  std::vector<Vec> frame{mm};
  frame.insert(frame.end(), T.begin(), T.end());
  if (eps * orientation_sign(c, x, frame) < 0) mm = -mm;
  return {mm, basis.back()};
}

}  // namespace

double measured_dihedral(const Configuration& c, const FaceId& ridge, bool swap_labels) {
  const Space& sp = c.space;
  const int n = c.n();
  if (ridge.size() != n - 1) throw Error(ErrorCode::input, "measured_dihedral needs an (n-2)-face");
  const int k = missing_index(n, ridge);
  std::vector<Vec> Fv = c.vertices(ridge);
  Vec x = barycenter(sp, Fv);
  std::vector<Vec> Ft_raw;
  for (size_t j = 1; j < Fv.size(); ++j) Ft_raw.push_back(tangent_at(sp, x, Fv[j] - Fv[0]));
  std::vector<Vec> Ft = orthonormalize(sp, Ft_raw);
  if (static_cast<int>(Ft.size()) != n - 2) throw Error(ErrorCode::degeneracy, "degenerate face " + ridge.label(n));

  FaceId f1{ridge.I | (1u << k), ridge.J};
  FaceId f2{ridge.I, ridge.J | (1u << k)};
  int o1 = k, o2 = n + k;
  if (swap_labels) {
    std::swap(f1, f2);
    std::swap(o1, o2);
  }
  FacetNormals N1 = facet_normals(c, x, Ft, f1, o1);
  FacetNormals N2 = facet_normals(c, x, Ft, f2, o2);
  // positive direction takes m_1 to n_1 by +π/2, so the coordinates of n_2 in
  // the (n_1, -m_1) plane give the rotation angle
  return std::atan2(-bilinear_form(sp, N2.interior, N1.exterior), bilinear_form(sp, N2.interior, N1.interior));
}

std::uint32_t X_set(const SimplestTypeData& d, int k) {
  std::uint32_t X = 0;
  for (int i = 0; i < d.n(); ++i) {
    if ((i < k && d.product(i) == 1) || (i > k && d.product(i) == -1)) X |= 1u << i;
  }
  return X;
}

double lambda_face(const SimplestTypeData& d, const FaceId& ridge) {
  const int k = missing_index(d.n(), ridge);
  int parity = std::popcount(ridge.J & X_set(d, k)) % 2;
  return (parity ? -1.0 : 1.0) * d.s[k] * d.lambda[k];
}

double predicted_dihedral(const SimplestTypeData& d, const FaceId& ridge, const FlexParam& u) {
  if (d.n() == 2 && d.space.kind != Kind::spherical)
    throw Error(ErrorCode::unsupported, "angle law is not asserted for quadrangles in E^2 and Λ^2");
  const int k = missing_index(d.n(), ridge);
  const double lf = lambda_face(d, ridge);
  double t = u.infinite ? std::copysign(M_PI / 2, lf) : std::atan(lf * u.value);
  return canonical_angle(2.0 * t + (d.product(k) == 1 ? 0.0 : M_PI));
}

double sign_law_residual(const Configuration& c) {
  if (!c.family) throw Error(ErrorCode::input, "sign law needs the family data");
  const SimplestTypeData& d = c.family->data;
  const int n = c.n();
  double worst = 0.0;
  for (const FaceId& r : ridges(n)) {
    const int k = missing_index(n, r);
    const std::uint32_t X = X_set(d, k);
    for (int l = 0; l < n; ++l) {
      if (!has(r.I, l)) continue;  // pair Δ_{U∪l,W} with Δ_{U,W∪l}
      FaceId other{r.I & ~(1u << l), r.J | (1u << l)};
      double p1 = measured_dihedral(c, r);
      double p2 = measured_dihedral(c, other);
      double expect = has(X, l) ? -p1 : p1;
      worst = std::max(worst, angle_distance(p2, expect));
    }
  }
  return worst;
}

LinkPolytope link_of_face(const Configuration& c, const FaceId& face) {
  const Space& sp = c.space;
  const int n = c.n();
  if (face.dim() > n - 2) throw Error(ErrorCode::input, "link needs a face of dimension <= n-2");
  LinkPolytope L;
  std::vector<Vec> G = c.vertices(face);
  std::vector<Vec> Gt;
  if (G.empty()) {
    if (sp.kind != Kind::spherical) throw Error(ErrorCode::unsupported, "empty-face link is spherical only");
    // the empty face: the polytope itself, viewed in the ambient sphere
    L.center = Vec();
    for (int id = 0; id < 2 * n; ++id) {
      L.vertex_ids.push_back(id);
      L.directions.push_back(c.vertex(id));
    }
    for (const FaceId& f : facets(n)) L.faces.push_back(f);
    return L;
  }
  L.center = barycenter(sp, G);
  for (size_t j = 1; j < G.size(); ++j) Gt.push_back(tangent_at(sp, L.center, G[j] - G[0]));
  Gt = orthonormalize(sp, Gt);
  if (static_cast<int>(Gt.size()) != face.dim()) throw Error(ErrorCode::degeneracy, "degenerate face");
  const std::uint32_t used = face.I | face.J;
  for (int i = 0; i < n; ++i) {
    if (has(used, i)) continue;
    for (int id : {i, n + i}) {
      Vec t = tangent_at(sp, L.center, c.vertex(id) - L.center);
      for (int pass = 0; pass < 2; ++pass)
        for (const Vec& g : Gt) t -= bilinear_form(sp, g, t) * g;
      double q = quadratic_form(sp, t);
      if (q <= 1e-24) throw Error(ErrorCode::degeneracy, "link direction vanishes");
      L.vertex_ids.push_back(id);
      L.directions.push_back(t / std::sqrt(q));
    }
  }
  for (const FaceId& f : facets(n))
    if (f.contains(face)) L.faces.push_back({f.I & ~face.I, f.J & ~face.J});
  return L;
}

const char* to_string(QuadrangleType t) {
  switch (t) {
    case QuadrangleType::equal_opposite_first: return "opposite-sides-equal-inverse";
    case QuadrangleType::equal_opposite_second: return "opposite-sides-equal-inverse-second";
    case QuadrangleType::supplementary: return "supplementary-sides";
  }
  return "?";
}

QuadrangleClassification classify_link_quadrangle(const FamilyPtr& fam, const FaceId& face,
                                                  const std::vector<FlexParam>& samples) {
  const int n = fam->data.n();
  if (n < 3) throw Error(ErrorCode::input, "link quadrangles need n >= 3");
  auto [k, l] = missing_pair(n, face);
  const Space& sp = fam->data.space;
  Configuration c0 = configuration(fam, FlexParam::finite(0.5));
  LinkPolytope L = link_of_face(c0, face);
  auto dir = [&](int id) {
    for (size_t t = 0; t < L.vertex_ids.size(); ++t)
      if (L.vertex_ids[t] == id) return L.directions[t];
    throw Error(ErrorCode::input, "vertex not in link");
  };
  auto side = [&](int p, int q) {
    double cs = std::clamp(bilinear_form(sp, dir(p), dir(q)), -1.0, 1.0);
    return std::acos(cs);
  };
  const int A = l, B = k, C = n + l, D = n + k;
  QuadrangleClassification out;
  out.alpha = side(A, B);
  out.beta = side(A, D);
  const double cd = side(C, D), bc = side(B, C);
  const double eq = std::max(std::abs(out.alpha - cd), std::abs(out.beta - bc));
  const double sup = std::max(std::abs(out.alpha + cd - M_PI), std::abs(out.beta + bc - M_PI));
  const double tol = 1e-9;
  if (std::abs(out.alpha - out.beta) <= tol || std::abs(out.alpha + out.beta - M_PI) <= tol)
    throw Error(ErrorCode::classification, "link sides violate α ≠ β, α + β ≠ π");
  bool supplementary;
  if (eq <= tol) {
    supplementary = false;
    out.side_residual = eq;
  } else if (sup <= tol) {
    supplementary = true;
    out.side_residual = sup;
  } else {
    throw Error(ErrorCode::classification, "link quadrangle matches no Bricard type");
  }

  // ψ_A lives at the ridge G ∪ {a_l} (missing k), ψ_B at G ∪ {a_k} (missing l)
  FaceId rA{face.I | (1u << l), face.J};
  FaceId rB{face.I | (1u << k), face.J};
  std::vector<double> vals;
  for (const FlexParam& u : samples) {
    Configuration c = configuration(fam, u);
    double ta = std::tan(0.5 * measured_dihedral(c, rA));
    double tb = std::tan(0.5 * measured_dihedral(c, rB));
    vals.push_back(supplementary ? ta / tb : ta * tb);
  }
  std::vector<double> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  out.bricard_constant = sorted[sorted.size() / 2];
  double spread = 0.0;
  for (double v : vals) spread = std::max(spread, std::abs(v - out.bricard_constant));
  out.constant_spread = spread / std::max(1.0, std::abs(out.bricard_constant));
  if (supplementary) {
    out.type = QuadrangleType::supplementary;
  } else {
    double first = std::cos(0.5 * (out.alpha - out.beta)) / std::cos(0.5 * (out.alpha + out.beta));
    double second = std::sin(0.5 * (out.beta - out.alpha)) / std::sin(0.5 * (out.alpha + out.beta));
    out.type = std::abs(out.bricard_constant - first) <= std::abs(out.bricard_constant - second)
                   ? QuadrangleType::equal_opposite_first
                   : QuadrangleType::equal_opposite_second;
  }
  return out;
}

}  // namespace flexcross
