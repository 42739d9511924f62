#include "flexcross/flatgeom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "flexcross/angles.hpp"

namespace flexcross {

const char* to_string(FlatCase c) {
  return c == FlatCase::concentric ? "concentric-spheres-or-orispheres" : "common-hyperplane";
}

const char* to_string(PointType t) {
  switch (t) {
    case PointType::interior: return "interior";
    case PointType::absolute: return "absolute";
    case PointType::at_infinity: return "at-infinity";
    case PointType::exterior: return "exterior";
  }
  return "?";
}

const char* to_string(PerKKind k) {
  switch (k) {
    case PerKKind::circumscribed: return "circumscribed";
    case PerKKind::equidistant: return "equidistant";
    case PerKKind::parallel: return "parallel";
    case PerKKind::equal_angle: return "equal-angle";
  }
  return "?";
}

FlatFrame flat_frame(const Space& sp, const Vec& m) {
  FlatFrame f;
  f.space = sp;
  const int d = sp.dim();
  auto proj = [&](const Vec& e) { return Vec(e - bilinear_form(sp, e, m) / quadratic_form(sp, m) * m); };
  std::vector<Vec> q;
  if (sp.kind == Kind::hyperbolic) {
    Vec t = proj(Vec::Unit(d, 0));
    t /= std::sqrt(-quadratic_form(sp, t));
    q.push_back(t);
  }
  for (int i = 0; i < d && static_cast<int>(q.size()) < d - 1; ++i) {
    Vec w = proj(Vec::Unit(d, i));
    for (const Vec& p : q) w -= bilinear_form(sp, w, p) / quadratic_form(sp, p) * p;
    const double nn = quadratic_form(sp, w);
    if (nn > 1e-6) q.push_back(w / std::sqrt(nn));
  }
  f.basis.resize(d, q.size());
  for (size_t j = 0; j < q.size(); ++j) f.basis.col(j) = q[j];
  f.metric = Vec::Ones(sp.n);
  if (sp.kind == Kind::hyperbolic) f.metric[0] = -1.0;
  return f;
}

namespace {

Vec linear_coords(const FlatFrame& f, const Vec& v) {
  const int c = static_cast<int>(f.basis.cols());
  Vec out = Vec::Zero(f.space.n);
  for (int j = 0; j < c; ++j) {
    const Vec& q = f.basis.col(j);
    out[j] = bilinear_form(f.space, v, q) * quadratic_form(f.space, q);
  }
  return out;
}

int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

std::vector<Vec> coords_of(const FlatFrame& f, const std::vector<Vec>& v) {
  std::vector<Vec> out;
  for (const Vec& x : v) out.push_back(flat_coords(f, x));
  return out;
}

const SimplestTypeData& family_data(const Configuration& c) {
  if (!c.family) throw Error(ErrorCode::input, "flat analysis needs the family data");
  return c.family->data;
}

void require_flat(const Configuration& c) {
  if (c.n() < 3) throw Error(ErrorCode::unsupported, "flat geometry needs n >= 3");
  for (int id = 0; id < 2 * c.n(); ++id)
    if (std::abs(bilinear_form(c.space, c.vertex(id), c.axis)) > 1e-9)
      throw Error(ErrorCode::input, "configuration is not in a flat position");
}

// The (n-3)-face with vertex `extra` added.
FaceId with_vertex(const FaceId& G, int n, int id) {
  FaceId F = G;
  if (id < n) F.I |= 1u << id;
  else F.J |= 1u << (id - n);
  return F;
}

}  // namespace

Vec flat_coords(const FlatFrame& f, const Vec& v) {
  Vec out = linear_coords(f, v);
  if (f.space.kind == Kind::euclidean) out[f.space.n - 1] = 1.0;
  return out;
}

ProjectiveHyperplane make_projective(const Vec& phi) {
  Vec p = phi / phi.norm();
  for (int i = 0; i < p.size(); ++i)
    if (std::abs(p[i]) > 1e-14) {
      if (p[i] < 0) p = -p;
      break;
    }
  return {p};
}

double projective_distance(const Vec& x, const Vec& y) {
  // sin θ = |x̂ - ŷ| |x̂ + ŷ| / 2 stays accurate for nearly equal lines
  const Vec a = x.normalized(), b = y.normalized();
  return 0.5 * (a - b).norm() * (a + b).norm();
}

Vec facet_functional(const FlatFrame& f, const std::vector<Vec>& pts) {
  const int d = f.space.n;
  Mat M(pts.size(), d);
  for (size_t i = 0; i < pts.size(); ++i) M.row(i) = pts[i].transpose();
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  Vec phi = svd.matrixV().col(d - 1);
  double nr;
  if (f.space.kind == Kind::euclidean) {
    nr = phi.head(d - 1).norm();
  } else {
    nr = std::sqrt(std::abs(phi.dot(f.metric.cwiseProduct(phi))));
  }
  if (!(nr > 1e-14)) throw Error(ErrorCode::degeneracy, "facet hyperplane is degenerate");
  return phi / nr;
}

namespace {

Vec raw_bisector(const Configuration& c, const FlatFrame& fr, int k, const FaceId& G, double* margin) {
  const int n = c.n();
  const SimplestTypeData& d = family_data(c);
  const std::uint32_t used = G.I | G.J | (1u << k);
  int l = -1;
  for (int i = 0; i < n; ++i)
    if (!has(used, i)) {
      if (l >= 0) throw Error(ErrorCode::input, "face must miss exactly k and one more index");
      l = i;
    }
  if (l < 0 || G.size() != n - 2) throw Error(ErrorCode::input, "face must have dimension n-3");
  std::vector<Vec> g = coords_of(fr, c.vertices(G));
  const Vec al = flat_coords(fr, c.a[l]), bl = flat_coords(fr, c.b[l]);
  std::vector<Vec> p1 = g, p2 = g;
  p1.push_back(al);
  p2.push_back(bl);
  Vec f1 = facet_functional(fr, p1), f2 = facet_functional(fr, p2);
  if (f1.dot(bl) < 0) f1 = -f1;
  if (f2.dot(al) < 0) f2 = -f2;
  const double s = projective_distance(f1, f2);
  if (margin) *margin = s;
  if (s < 1e-9) throw Error(ErrorCode::degeneracy, "dihedral angle of P_(k) is 0 or π");
  return has(X_set(d, k), l) ? Vec(f1 - f2) : Vec(f1 + f2);
}

}  // namespace

ProjectiveHyperplane bisector_hyperplane(const Configuration& c, int k, const FaceId& G, double* margin) {
  require_flat(c);
  FlatFrame fr = flat_frame(c.space, c.axis);
  return make_projective(raw_bisector(c, fr, k, G, margin));
}

double ratio_r(const Configuration& c, const FaceId& F1, const ProjectiveHyperplane& H, const FaceId& F2) {
  if (F1 == F2) return 1.0;
  const int n = c.n();
  const Space& sp = c.space;
  FaceId G{F1.I & F2.I, F1.J & F2.J};
  if (F1.size() != n - 1 || F2.size() != n - 1 || G.size() != n - 2)
    throw Error(ErrorCode::input, "F1 and F2 must be (n-2)-faces sharing an (n-3)-face");
  FlatFrame fr = flat_frame(sp, c.axis);
  std::vector<Vec> gv = c.vertices(G);
  for (const Vec& v : gv) {
    Vec x = flat_coords(fr, v);
    if (std::abs(H.functional.dot(x)) > 1e-8 * x.norm()) throw Error(ErrorCode::input, "H does not contain the common face");
  }
  auto extra = [&](const FaceId& F) {
    for (int id : F.vertex_ids(n))
      if (!(id < n ? has(G.I, id) : has(G.J, id - n))) return id;
    return -1;
  };
  const Vec x = barycenter(sp, gv);
  std::vector<Vec> gt;
  for (size_t i = 1; i < gv.size(); ++i) gt.push_back(tangent_at(sp, x, gv[i] - gv[0]));
  gt = orthonormalize(sp, gt);
  auto dirn = [&](const Vec& v) {
    Vec w = tangent_at(sp, x, v - x);
    for (const Vec& o : gt) w -= bilinear_form(sp, o, w) * o;
    return Vec(w / std::sqrt(quadratic_form(sp, w)));
  };
  const Vec d1 = dirn(c.vertex(extra(F1))), d2 = dirn(c.vertex(extra(F2)));
  Vec e2 = d2 - bilinear_form(sp, d1, d2) * d1;
  const double e2n = quadratic_form(sp, e2);
  if (!(e2n > 1e-18)) throw Error(ErrorCode::degeneracy, "F1 and F2 are collinear at their common face");
  e2 /= std::sqrt(e2n);
  const Vec& e1 = d1;
  const double h1 = H.functional.dot(linear_coords(fr, e1)), h2 = H.functional.dot(linear_coords(fr, e2));
  const Vec h = h2 * e1 - h1 * e2;
  auto theta = [&](const Vec& v) { return std::atan2(bilinear_form(sp, v, e2), bilinear_form(sp, v, e1)); };
  const double th = theta(h), t1 = theta(d1), t2 = theta(d2);
  return std::sin(th - t1) / std::sin(t2 - th);
}

double ratio_law_residual(const Configuration& c) {
  require_flat(c);
  const int n = c.n();
  const SimplestTypeData& d = family_data(c);
  const bool at_inf = c.u.infinite;
  if (!at_inf && c.u.value != 0.0) throw Error(ErrorCode::input, "flat positions are u = 0 and u = ∞");
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      std::vector<int> others;
      for (int i = 0; i < n; ++i)
        if (i != k && i != l) others.push_back(i);
      for (std::uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
        FaceId G;
        for (size_t t = 0; t < others.size(); ++t) {
          if ((mask >> t) & 1u) G.I |= 1u << others[t];
          else G.J |= 1u << others[t];
        }
        ProjectiveHyperplane B = bisector_hyperplane(c, k, G);
        for (int i1 : {l, n + l})
          for (int i2 : {k, n + k}) {
            FaceId F1 = with_vertex(G, n, i1), F2 = with_vertex(G, n, i2);
            const double r = ratio_r(c, F1, B, F2);
            double expect = lambda_face(d, F2) / lambda_face(d, F1);
            if (at_inf) expect = 1.0 / expect;
            worst = std::max(worst, std::abs(r - expect) / std::max(1.0, std::abs(expect)));
          }
      }
    }
  return worst;
}

Concurrency concurrency_point(const Configuration& c, double threshold) {
  require_flat(c);
  const int n = c.n();
  FlatFrame fr = flat_frame(c.space, c.axis);
  Concurrency out;
  out.dihedral_margin = std::numeric_limits<double>::infinity();
  std::vector<Vec> rows;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      if (l == k) continue;
      std::vector<int> others;
      for (int i = 0; i < n; ++i)
        if (i != k && i != l) others.push_back(i);
      for (std::uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
        FaceId G;
        for (size_t t = 0; t < others.size(); ++t) {
          if ((mask >> t) & 1u) G.I |= 1u << others[t];
          else G.J |= 1u << others[t];
        }
        double margin = 0.0;
        Vec b = raw_bisector(c, fr, k, G, &margin);
        out.dihedral_margin = std::min(out.dihedral_margin, margin);
        b.normalize();
        rows.push_back(b);
        if (k < l) {
          Vec b2 = raw_bisector(c, fr, l, G, nullptr);
          out.bisector_coincidence = std::max(out.bisector_coincidence, projective_distance(b, b2));
        }
      }
    }
  Mat M(rows.size(), n);
  for (size_t i = 0; i < rows.size(); ++i) M.row(i) = rows[i].transpose();
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  out.residual = sv[n - 1] / sv[n - 2];
  Vec O = svd.matrixV().col(n - 1);
  Eigen::Index imax;
  O.cwiseAbs().maxCoeff(&imax);
  if (O[imax] < 0) O = -O;
  if (c.space.kind == Kind::hyperbolic && O.dot(fr.metric.cwiseProduct(O)) < 0 && O[0] < 0) O = -O;
  out.O = O;

  // Ceva triples: three (n-2)-faces of one facet give three dependent bisectors
  for (const FaceId& D : facets(n))
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int t = j + 1; t < n; ++t) {
          auto drop = [&](int p, int q) {
            FaceId G = D;
            G.I &= ~((1u << p) | (1u << q));
            G.J &= ~((1u << p) | (1u << q));
            return G;
          };
          Mat T(3, n);
          T.row(0) = raw_bisector(c, fr, i, drop(i, j), nullptr).normalized().transpose();
          T.row(1) = raw_bisector(c, fr, j, drop(j, t), nullptr).normalized().transpose();
          T.row(2) = raw_bisector(c, fr, i, drop(i, t), nullptr).normalized().transpose();
          Eigen::JacobiSVD<Mat> s3(T);
          out.triple_residual = std::max(out.triple_residual, s3.singularValues()[2] / s3.singularValues()[0]);
        }
  if (out.residual > threshold)
    throw Error(ErrorCode::concurrency_failure,
                "bisecting hyperplanes are not concurrent (residual " + std::to_string(out.residual) + ")");
  return out;
}

FlatAnalysis classify_flat(const Configuration& c, const Concurrency& conc) {
  require_flat(c);
  const int n = c.n();
  const Space& sp = c.space;
  const SimplestTypeData& d = family_data(c);
  FlatFrame fr = flat_frame(sp, c.axis);
  FlatAnalysis fa;
  fa.O = conc.O;
  fa.residual = conc.residual;
  Vec Ohat = conc.O;
  const double q = Ohat.dot(fr.metric.cwiseProduct(Ohat));
  switch (sp.kind) {
    case Kind::spherical: fa.point = PointType::interior; break;
    case Kind::hyperbolic:
      if (std::abs(q) < 1e-8) fa.point = PointType::absolute;
      else if (q < 0) {
        fa.point = PointType::interior;
        Ohat /= std::sqrt(-q);
      } else {
        fa.point = PointType::exterior;
        Ohat /= std::sqrt(q);
      }
      break;
    case Kind::euclidean:
      if (std::abs(Ohat[n - 1]) > 1e-8) {
        fa.point = PointType::interior;
        Ohat /= Ohat[n - 1];
      } else {
        fa.point = PointType::at_infinity;
        Ohat[n - 1] = 0.0;
        Ohat.normalize();
      }
      break;
  }
  fa.flat_case = (fa.point == PointType::exterior || fa.point == PointType::at_infinity) ? FlatCase::common_hyperplane
                                                                                        : FlatCase::concentric;
  for (int k = 0; k < n; ++k) {
    PerK pk;
    pk.k = k;
    pk.facets = facets_without(n, k);
    const std::uint32_t X = X_set(d, k);
    std::vector<double> cvals;
    for (const FaceId& F : pk.facets) {
      std::vector<Vec> ordered = coords_of(fr, c.vertices(F));
      Vec phi = facet_functional(fr, ordered);
      std::vector<Vec> cols = ordered;
      cols.push_back(sp.kind == Kind::hyperbolic ? Vec(fr.metric.cwiseProduct(phi)) : phi);
      const int sg = sgn(det_columns(cols)) * (std::popcount(F.J) % 2 ? -1 : 1);
      cvals.push_back(sg * phi.dot(Ohat));
    }
    // per-facet derived values
    std::vector<double> vals;
    const double mean_abs = [&] {
      double s = 0.0;
      for (double v : cvals) s += std::abs(v);
      return s / cvals.size();
    }();
    for (double v : cvals) {
      const double a = std::abs(v);
      switch (fa.point) {
        case PointType::interior:
          vals.push_back(sp.kind == Kind::spherical ? std::asin(std::min(1.0, a))
                         : sp.kind == Kind::hyperbolic ? std::asinh(a)
                                                       : a);
          break;
        case PointType::absolute: vals.push_back(a / mean_abs); break;
        case PointType::at_infinity: vals.push_back(std::acos(std::min(1.0, a))); break;
        case PointType::exterior: vals.push_back(a); break;
      }
    }
    if (fa.point == PointType::exterior) {
      if (mean_abs > 1.0 + 1e-8) {
        pk.kind = PerKKind::equidistant;
        for (double& v : vals) v = std::acosh(std::max(1.0, v));
      } else if (mean_abs >= 1.0 - 1e-8) {
        pk.kind = PerKKind::parallel;
      } else {
        pk.kind = PerKKind::equal_angle;
        for (double& v : vals) v = std::acos(std::min(1.0, v));
      }
    } else if (fa.point == PointType::at_infinity) {
      pk.kind = PerKKind::equal_angle;
    }
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    pk.spread = *hi - *lo;
    pk.distance = fa.point == PointType::absolute ? 0.0 : 0.5 * (*hi + *lo);
    int anchor = 0;
    for (size_t i = 0; i < pk.facets.size(); ++i)
      if (pk.facets[i].J == 0) anchor = sgn(cvals[i]);
    pk.parity_ok = anchor != 0;
    for (size_t i = 0; i < pk.facets.size(); ++i) {
      const int cls = sgn(cvals[i]) == anchor ? 0 : 1;
      pk.classes.push_back(cls);
      const int parity = std::popcount(pk.facets[i].J & ~X) % 2;
      if (cls != parity) pk.parity_ok = false;
    }
    fa.per_k.push_back(pk);
  }
  return fa;
}

RelationResidual circumscribed_alternating_sum(const Configuration& c, const FlatAnalysis& fa, int k,
                                               FaceVolumeCache& volumes) {
  const int n = c.n();
  if (k < 0 || k >= n || static_cast<int>(fa.per_k.size()) != n) throw Error(ErrorCode::input, "bad index k");
  const PerK& pk = fa.per_k[k];
  if (c.space.kind == Kind::spherical) {
    FlatFrame fr = flat_frame(c.space, c.axis);
    bool pos = true, neg = true;
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      for (const Vec& v : {c.a[i], c.b[i]}) {
        const double t = flat_coords(fr, v).dot(fa.O);
        pos = pos && t >= -1e-10;
        neg = neg && t <= 1e-10;
      }
    }
    if (!pos && !neg)
      throw Error(ErrorCode::not_applicable, "P_(" + std::to_string(k + 1) + ") is not in a hemisphere centred at O");
  }
  double sum = 0.0, err = 0.0;
  for (size_t i = 0; i < pk.facets.size(); ++i) {
    VolumeEstimate v = volumes.get(pk.facets[i]);
    const double cls = pk.classes[i] ? -1.0 : 1.0;
    const double colour = std::popcount(pk.facets[i].J) % 2 ? -1.0 : 1.0;
    sum += cls * colour * v.value;
    err += v.abs_error;
  }
  RelationResidual r;
  r.residual = std::abs(sum);
  r.bound = err;
  return r;
}

}  // namespace flexcross
