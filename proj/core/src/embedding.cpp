#include "flexcross/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "flexcross/lp.hpp"

namespace flexcross {

const char* to_string(RelationTag t) {
  switch (t) {
    case RelationTag::disjoint: return "disjoint";
    case RelationTag::shared_face: return "exactly-shared-face";
    case RelationTag::improper: return "improper";
    case RelationTag::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(EmbedVerdict v) {
  switch (v) {
    case EmbedVerdict::embedded: return "embedded";
    case EmbedVerdict::self_intersecting: return "self-intersecting";
    case EmbedVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(Hemisphere h) {
  switch (h) {
    case Hemisphere::strictly_positive: return "strictly-positive";
    case Hemisphere::strictly_negative: return "strictly-negative";
    case Hemisphere::closed_positive: return "closed-positive";
    case Hemisphere::closed_negative: return "closed-negative";
    case Hemisphere::equatorial: return "equatorial";
    case Hemisphere::mixed: return "mixed";
  }
  return "?";
}

namespace {

// Coordinates in which the simplices are affine (euclidean, Klein) or conic (spherical).
std::vector<Vec> working_coords(const Space& sp, const std::vector<Vec>& v) {
  if (sp.kind != Kind::hyperbolic) return v;
  std::vector<Vec> out;
  for (const Vec& x : v) out.push_back(x.tail(sp.n) / x[0]);
  return out;
}

struct PairLp {
  Mat A;
  Vec b;
  int n1 = 0, n2 = 0, slack = 0;
};

// Variables: α (n1), β (n2), then optionally residual slacks r+, r- (2d).
PairLp pair_lp(bool conic, const std::vector<Vec>& v, const std::vector<Vec>& w, bool with_slack) {
  const int d = static_cast<int>(v[0].size());
  PairLp p;
  p.n1 = static_cast<int>(v.size());
  p.n2 = static_cast<int>(w.size());
  p.slack = with_slack ? 2 * d : 0;
  const int rows = d + (conic ? 1 : 2);
  p.A = Mat::Zero(rows, p.n1 + p.n2 + p.slack);
  p.b = Vec::Zero(rows);
  for (int i = 0; i < p.n1; ++i) p.A.block(0, i, d, 1) = v[i];
  for (int j = 0; j < p.n2; ++j) p.A.block(0, p.n1 + j, d, 1) = -w[j];
  if (with_slack) {
    p.A.block(0, p.n1 + p.n2, d, d) = Mat::Identity(d, d);
    p.A.block(0, p.n1 + p.n2 + d, d, d) = -Mat::Identity(d, d);
  }
  for (int i = 0; i < p.n1; ++i) p.A(d, i) = 1.0;
  p.b[d] = 1.0;
  if (!conic) {
    for (int j = 0; j < p.n2; ++j) p.A(d + 1, p.n1 + j) = 1.0;
    p.b[d + 1] = 1.0;
  }
  return p;
}

Vec witness_point(const Space& sp, const std::vector<Vec>& s1, const Vec& alpha) {
  Vec x = Vec::Zero(s1[0].size());
  for (size_t i = 0; i < s1.size(); ++i) x += alpha[i] * s1[i];
  return sp.kind == Kind::euclidean ? x : project_to_model(sp, x, 1);
}

std::vector<Vec> shrink(const std::vector<Vec>& v, double t) {
  Vec c = Vec::Zero(v[0].size());
  for (const Vec& x : v) c += x;
  c /= static_cast<double>(v.size());
  std::vector<Vec> out;
  for (const Vec& x : v) out.push_back((1.0 - t) * x + t * c);
  return out;
}

double min_residual(bool conic, const std::vector<Vec>& v, const std::vector<Vec>& w, Vec* alpha) {
  PairLp p = pair_lp(conic, v, w, true);
  Vec c = Vec::Zero(p.A.cols());
  c.tail(p.slack).setOnes();
  LpResult r = solve_lp(p.A, p.b, c);
  if (r.status != LpStatus::optimal) return std::numeric_limits<double>::infinity();
  if (alpha) *alpha = r.x.head(p.n1);
  return r.objective;
}

}  // namespace

IntersectionRelation simplex_pair_relation(const Space& sp, const std::vector<Vec>& s1, const std::vector<int>& ids1,
                                           const std::vector<Vec>& s2, const std::vector<int>& ids2,
                                           const IntersectionTolerances& tol) {
  if (s1.empty() || s2.empty() || s1.size() != ids1.size() || s2.size() != ids2.size())
    throw Error(ErrorCode::input, "simplex vertex/id lists mismatch");
  const bool conic = sp.kind == Kind::spherical;
  const std::vector<Vec> v = working_coords(sp, s1);
  const std::vector<Vec> w = working_coords(sp, s2);
  std::vector<bool> sh1(s1.size(), false), sh2(s2.size(), false);
  bool any_shared = false;
  for (size_t i = 0; i < ids1.size(); ++i)
    for (size_t j = 0; j < ids2.size(); ++j)
      if (ids1[i] == ids2[j]) {
        sh1[i] = sh2[j] = true;
        any_shared = true;
      }
  IntersectionRelation rel;
  if (any_shared) {
    // maximize the barycentric mass carried by non-shared vertices
    PairLp p = pair_lp(conic, v, w, false);
    Vec c = Vec::Zero(p.A.cols());
    for (int i = 0; i < p.n1; ++i)
      if (!sh1[i]) c[i] = -1.0;
    for (int j = 0; j < p.n2; ++j)
      if (!sh2[j]) c[p.n1 + j] = -1.0;
    LpResult r = solve_lp(p.A, p.b, c);
    if (r.status == LpStatus::infeasible) throw Error(ErrorCode::degeneracy, "shared vertices do not coincide");
    const double mass = r.status == LpStatus::unbounded ? std::numeric_limits<double>::infinity() : -r.objective;
    rel.margin = mass;
    if (mass <= tol.zero) {
      rel.tag = RelationTag::shared_face;
    } else if (mass > tol.improper) {
      rel.tag = RelationTag::improper;
      if (r.status == LpStatus::optimal) rel.witness = witness_point(sp, s1, r.x.head(p.n1));
    } else {
      rel.tag = RelationTag::inconclusive;
    }
    return rel;
  }
  Vec alpha;
  const double D = min_residual(conic, v, w, &alpha);
  rel.margin = D;
  if (D > tol.zero) {
    rel.tag = RelationTag::disjoint;
    return rel;
  }
  const double Ds = min_residual(conic, shrink(v, tol.shrink), shrink(w, tol.shrink), nullptr);
  if (Ds <= tol.zero) {
    rel.tag = RelationTag::improper;
    rel.witness = witness_point(sp, s1, alpha);
  } else {
    rel.tag = RelationTag::inconclusive;
  }
  return rel;
}

EmbeddingResult is_embedded(const Configuration& c, const IntersectionTolerances& tol) {
  const int n = c.n();
  const std::vector<FaceId> all = facets(n);
  EmbeddingResult res;
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j) {
      const FaceId &F1 = all[i], &F2 = all[j];
      IntersectionRelation r = simplex_pair_relation(c.space, c.vertices(F1), F1.vertex_ids(n), c.vertices(F2),
                                                     F2.vertex_ids(n), tol);
      if (r.tag == RelationTag::improper) {
        res.verdict = EmbedVerdict::self_intersecting;
        res.witness = r.witness;
        res.pair = std::make_pair(F1, F2);
        return res;
      }
      if (r.tag == RelationTag::inconclusive && res.verdict == EmbedVerdict::embedded) {
        res.verdict = EmbedVerdict::inconclusive;
        res.pair = std::make_pair(F1, F2);
      }
    }
  return res;
}

int spherical_degree(const Configuration& c, Rng& rng) {
  if (c.space.kind != Kind::spherical) throw Error(ErrorCode::unsupported, "degree is defined for spherical configurations");
  const int n = c.n();
  const Vec& m = c.axis;
  for (int id = 0; id < 2 * n; ++id)
    if (std::abs(c.vertex(id).dot(m)) > 1e-9) throw Error(ErrorCode::input, "configuration is not flat");
  std::normal_distribution<double> N(0.0, 1.0);
  const auto all = facets(n);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec y(c.space.dim());
    for (int i = 0; i < y.size(); ++i) y[i] = N(rng);
    y -= y.dot(m) * m;
    y.normalize();
    int deg = 0;
    bool regular = true;
    for (const FaceId& F : all) {
      std::vector<Vec> v = c.vertices(F);
      Mat V(y.size(), n);
      for (int j = 0; j < n; ++j) V.col(j) = v[j];
      Vec beta = V.colPivHouseholderQr().solve(y);
      if ((V * beta - y).norm() > 1e-8) throw Error(ErrorCode::degeneracy, "facet does not span the equator");
      const double lo = beta.minCoeff();
      if (std::abs(lo) <= 1e-8) {
        regular = false;
        break;
      }
      if (lo < 0) continue;
      std::vector<Vec> cols{m};
      cols.insert(cols.end(), v.begin(), v.end());
      const double det = det_columns(cols);
      deg += facet_orientation_sign(n, F.I, F.J) * c.omega * (det > 0 ? 1 : -1);
    }
    if (regular) return deg;
  }
  throw Error(ErrorCode::indeterminate, "no regular value found");
}

Hemisphere hemisphere_position(const Configuration& c, const Vec& axis, double tol) {
  int pos = 0, neg = 0, zero = 0;
  for (int id = 0; id < 2 * c.n(); ++id) {
    const double t = bilinear_form(c.space, c.vertex(id), axis);
    if (t > tol) ++pos;
    else if (t < -tol) ++neg;
    else ++zero;
  }
  if (pos && neg) return Hemisphere::mixed;
  if (!pos && !neg) return Hemisphere::equatorial;
  if (pos) return zero ? Hemisphere::closed_positive : Hemisphere::strictly_positive;
  return zero ? Hemisphere::closed_negative : Hemisphere::strictly_negative;
}

double rho(const FamilyPtr& fam, const FlexParam& u) {
  if (fam->data.space.kind != Kind::spherical) throw Error(ErrorCode::unsupported, "rho is spherical");
  Configuration c = configuration(fam, u);
  double r = M_PI / 2;
  for (const Vec& b : c.b) r = std::min(r, std::asin(std::min(1.0, std::abs(b.dot(fam->frame.axis)))));
  return r;
}

RotatedFamily make_rotated_family(const FamilyPtr& base) {
  const SimplestTypeData& d = base->data;
  if (d.space.kind != Kind::spherical) throw Error(ErrorCode::unsupported, "the rotated family is spherical");
  for (int i = 0; i < d.n(); ++i)
    if (d.s[i] != -1 || d.s_prime[i] != 1) throw Error(ErrorCode::input, "rotation needs s_i = -1, s'_i = +1");
  RotatedFamily rf;
  rf.base = base;
  rf.axis = base->frame.axis;
  Vec k = Vec::Zero(d.space.dim());
  for (const Vec& nv : base->frame.normals) k += nv;
  if (std::abs(k.dot(rf.axis)) > 1e-10 * k.norm()) throw Error(ErrorCode::degeneracy, "k is not orthogonal to m");
  for (const Vec& cv : base->frame.duals)
    if (!(cv.dot(k) > 0)) throw Error(ErrorCode::degeneracy, "k is not acute with every c_i");
  rf.k = k.normalized();
  return rf;
}

double rotation_angle(const RotatedFamily& rf, const FlexParam& u) {
  if (u.infinite || u.value == 0.0) return 0.0;
  return 0.5 * (u.value > 0 ? 1.0 : -1.0) * rho(rf.base, u);
}

Vec rotate(const RotatedFamily& rf, double alpha, const Vec& v) {
  const double pk = v.dot(rf.k), pm = v.dot(rf.axis);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  return v + (ca - 1.0) * (pk * rf.k + pm * rf.axis) + sa * (pm * rf.k - pk * rf.axis);
}

Configuration rotated_configuration(const RotatedFamily& rf, const FlexParam& u) {
  Configuration c = configuration(rf.base, u);
  const double alpha = rotation_angle(rf, u);
  if (alpha == 0.0) return c;
  for (Vec& v : c.a) v = rotate(rf, alpha, v);
  for (Vec& v : c.b) v = rotate(rf, alpha, v);
  return c;
}

bool EmbeddingCertificate::pass() const {
  return !items.empty() && std::all_of(items.begin(), items.end(), [](const CertificateItem& i) { return i.pass; });
}

EmbeddingCertificate embedding_certificate(const RotatedFamily& rf, Rng& rng) {
  EmbeddingCertificate cert;
  const int n = rf.base->data.n();

  // (i) embedded on a symmetric bracket, scanning δ = 2^-10 .. 1
  {
    CertificateItem it{"embedded near u = 0", false, ""};
    int bad_j = -1;
    std::string why;
    for (int j = 10; j >= 0; --j) {
      const double delta = std::ldexp(1.0, -j);
      bool ok = true;
      for (double f : {1.0, 0.75, 0.5, 0.25}) {
        for (double sgn : {1.0, -1.0}) {
          FlexParam u = FlexParam::finite(sgn * f * delta);
          EmbeddingResult e = is_embedded(rotated_configuration(rf, u));
          if (e.verdict != EmbedVerdict::embedded) {
            ok = false;
            why = std::string(to_string(e.verdict)) + " at u=" + u.str();
            break;
          }
        }
        if (!ok) break;
      }
      if (!ok) {
        bad_j = j;
        break;
      }
      cert.delta = delta;
    }
    it.pass = cert.delta > 0;
    std::ostringstream os;
    os << "verified |u| <= " << cert.delta;
    if (bad_j >= 0) os << "; first failure: " << why;
    it.detail = os.str();
    cert.items.push_back(it);
  }

  // (ii) flat, degree one at u = 0
  {
    CertificateItem it{"P~_0 equatorial with degree 1", false, ""};
    Configuration c0 = rotated_configuration(rf, FlexParam::finite(0.0));
    Hemisphere h = hemisphere_position(c0, rf.axis);
    int deg = spherical_degree(c0, rng);
    it.pass = h == Hemisphere::equatorial && deg == 1;
    it.detail = std::string(to_string(h)) + ", degree " + std::to_string(deg);
    cert.items.push_back(it);
  }

  // (iii) strict hemisphere containment for u ≷ 0
  {
    CertificateItem it{"strict hemisphere containment", true, ""};
    int checked = 0;
    for (double mag : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0})
      for (double sgn : {1.0, -1.0}) {
        FlexParam u = FlexParam::finite(sgn * mag);
        Hemisphere h = hemisphere_position(rotated_configuration(rf, u), rf.axis);
        Hemisphere want = sgn > 0 ? Hemisphere::strictly_positive : Hemisphere::strictly_negative;
        ++checked;
        if (h != want && it.pass) {
          it.pass = false;
          it.detail = std::string(to_string(h)) + " at u=" + u.str();
        }
      }
    if (it.pass) it.detail = std::to_string(checked) + " samples";
    cert.items.push_back(it);
  }

  // (iv) flat and self-intersecting at u = ∞
  {
    CertificateItem it{"P~_inf equatorial and not embedded", false, ""};
    Configuration ci = rotated_configuration(rf, FlexParam::inf());
    Hemisphere h = hemisphere_position(ci, rf.axis);
    EmbeddingResult e = is_embedded(ci);
    cert.witness_at_infinity = e.witness;
    it.pass = h == Hemisphere::equatorial && e.verdict == EmbedVerdict::self_intersecting && e.witness.has_value();
    it.detail = std::string(to_string(h)) + ", " + to_string(e.verdict);
    if (e.pair) it.detail += " (" + e.pair->first.label(n) + " x " + e.pair->second.label(n) + ")";
    cert.items.push_back(it);
  }
  return cert;
}

bool VertexBounds::pass() const {
  for (double d : a_dist)
    if (!(d < bound)) return false;
  for (double d : b_dist)
    if (!(d < bound)) return false;
  return true;
}

VertexBounds identity_family_bounds(const FamilyPtr& fam) {
  if (fam->data.space.kind != Kind::spherical) throw Error(ErrorCode::unsupported, "spherical only");
  const int n = fam->data.n();
  Configuration c = configuration(fam, FlexParam::finite(0.0));
  VertexBounds vb;
  vb.bound = std::asin(1.0 / std::sqrt(static_cast<double>(n)));
  for (int i = 0; i < n; ++i) {
    const Vec& e = fam->frame.normals[i];
    vb.a_dist.push_back(geodesic_distance(c.space, c.a[i], -e));
    vb.b_dist.push_back(geodesic_distance(c.space, c.b[i], e));
  }
  return vb;
}

}  // namespace flexcross
