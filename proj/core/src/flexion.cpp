#include "flexcross/flexion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace flexcross {

FlexParam FlexParam::inverse() const {
  if (infinite) return finite(0.0);
  if (value == 0.0) return inf();
  return finite(1.0 / value);
}

std::string FlexParam::str() const {
  if (infinite) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

std::pair<double, double> flex_coefficients(double lambda, const FlexParam& u) {
  if (u.infinite) return {2.0, 0.0};
  const double t = lambda * u.value;
  if (std::abs(t) > 1e150) return {2.0, 2.0 / t};
  const double d = t * t + 1.0;
  return {2.0 * t * t / d, 2.0 * t / d};
}

std::vector<Vec> Configuration::vertices(const FaceId& f) const {
  std::vector<Vec> out;
  for (int id : f.vertex_ids(n())) out.push_back(vertex(id));
  return out;
}

std::string validate_data(const SimplestTypeData& d) {
  const int n = d.space.n;
  if (n < 2) return "n >= 2";
  if (n > kMaxN) return "n <= 32";
  if (d.G.rows() != n || d.G.cols() != n) return "G is n x n";
  if (d.lambda.size() != n) return "lambda has n entries";
  if (static_cast<int>(d.s.size()) != n || static_cast<int>(d.s_prime.size()) != n)
    return "sign rows have n entries";
  for (int i = 0; i < n; ++i)
    if (std::abs(d.s[i]) != 1 || std::abs(d.s_prime[i]) != 1) return "signs are +1 or -1";
  std::string g = gram_condition_violation(d.space.kind, d.G, 1e-10);
  if (!g.empty()) return g;
  for (int i = 0; i < n; ++i) {
    if (!(d.lambda[i] > 0.0) || !std::isfinite(d.lambda[i])) return "λ positive";
    if (i > 0 && !(d.lambda[i] > d.lambda[i - 1])) return "λ strictly increasing";
  }
  if (d.space.kind != Kind::spherical) {
    bool all_same = true;
    for (int i = 1; i < n; ++i) all_same = all_same && d.product(i) == d.product(0);
    if (all_same) return "products s_i s'_i not all equal (euclidean/hyperbolic)";
  }
  return {};
}

Mat h_matrix(const Mat& G, const Vec& lambda) {
  const int n = static_cast<int>(lambda.size());
  Mat H = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double li = lambda[i], lj = lambda[j];
      H(i, j) = 2.0 * li * (li * G(i, j) - lj) / ((li - lj) * (li + lj));
    }
  return H;
}

static int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

static int compute_omega(const Space& space, const Vec& m, const std::vector<Vec>& a) {
  const int n = space.n;
  std::vector<Vec> cols;
  if (space.kind == Kind::euclidean) {
    cols.push_back(-m);
    for (int j = 1; j < n; ++j) cols.push_back(a[j] - a[0]);
  } else {
    cols.push_back(m);
    for (const Vec& v : a) cols.push_back(v);
  }
  int w = sgn(det_columns(cols));
  if (w == 0) throw Error(ErrorCode::degeneracy, "base simplex [a_1..a_n] is degenerate");
  return w;
}

namespace {

// Base simplex in E^n with facet normals ±n_i.  When `check` is set, the signs
// of the signed altitudes and of the b_i are compared with the data.
EuclideanBase euclidean_base(const SimplestTypeData& d, const Frame& fr, const Mat& H, bool check) {
  const int n = d.space.n;
  Eigen::SelfAdjointEigenSolver<Mat> es(d.G);
  int drop = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(es.eigenvalues()[i]) < std::abs(es.eigenvalues()[drop])) drop = i;
  Vec w = es.eigenvectors().col(drop);  // Σ w_i n_i = 0
  for (int i = 0; i < n; ++i)
    if (std::abs(w[i]) < 1e-9) throw Error(ErrorCode::degenerate_data, "vanishing kernel coefficient");
  // exterior normals ν_i = τ sign(w_i) n_i; the global τ is fixed by s_1
  const double tau = -d.s[0] * sgn(w[0]);
  std::vector<Vec> nu;
  for (int i = 0; i < n; ++i) nu.push_back(tau * sgn(w[i]) * fr.normals[i]);

  EuclideanBase base;
  for (int j = 0; j < n; ++j) {
    Mat M(n - 1, n - 1);
    int r = 0;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      M.row(r++) = nu[i].tail(n - 1).transpose();
    }
    Vec x = M.fullPivLu().solve(Vec::Ones(n - 1));
    Vec v = Vec::Zero(n);
    v.tail(n - 1) = x;
    base.vertices.push_back(v);
  }
  Vec bc = Vec::Zero(n);
  for (const Vec& v : base.vertices) bc += v;
  bc /= n;
  for (Vec& v : base.vertices) v -= bc;
  const double scale = base.vertices[0].norm();
  for (Vec& v : base.vertices) v /= scale;

  base.altitudes.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double h = std::abs((base.vertices[i] - base.vertices[j]).dot(fr.normals[i]));
    const int si = -sgn(nu[i].dot(fr.normals[i]));
    if (check && si != d.s[i])
      throw Error(ErrorCode::inconsistent_signs, "s_" + std::to_string(i + 1) +
                                                     " disagrees with the normal direction");
    base.altitudes[i] = si * h;
  }
  base.coefficients.resize(n);
  for (int i = 0; i < n; ++i) {
    double den = 0.0, mag = 0.0;
    for (int j = 0; j < n; ++j) {
      den += H(i, j) / base.altitudes[j];
      mag += std::abs(H(i, j) / base.altitudes[j]);
    }
    if (std::abs(den) <= 1e-12 * mag)
      throw Error(ErrorCode::degenerate_data, "vanishing denominator for b_" + std::to_string(i + 1));
    base.coefficients[i] = 1.0 / den;
    if (check && sgn(base.coefficients[i]) != d.s_prime[i])
      throw Error(ErrorCode::inconsistent_signs, "s'_" + std::to_string(i + 1) + " disagrees with sign of b_" +
                                                     std::to_string(i + 1));
  }
  return base;
}

}  // namespace

FamilyPtr build(const SimplestTypeData& data, const BuildOptions& opt) {
  std::string bad = validate_data(data);
  if (!bad.empty()) throw Error(ErrorCode::invalid_data, bad);
  auto fam = std::make_shared<FlexFamily>();
  fam->data = data;
  const Space& sp = data.space;
  const int n = sp.n;
  fam->frame = opt.frame ? *opt.frame : realize_gram(sp, data.G, opt.tol);
  fam->frame.duals.clear();
  fam->H = h_matrix(data.G, data.lambda);

  std::vector<Vec> a;
  if (sp.kind == Kind::euclidean) {
    fam->euclidean_base = euclidean_base(data, fam->frame, fam->H, opt.check_signs);
    a = fam->euclidean_base->vertices;
  } else {
    fam->frame.duals = dual_basis(sp, fam->frame, data.G);
    if (sp.kind == Kind::hyperbolic) {
      for (int i = 0; i < n; ++i)
        if (quadratic_form(sp, fam->frame.duals[i]) >= -opt.tol.timelike)
          throw Error(ErrorCode::not_timelike, "c_" + std::to_string(i + 1) + " is not timelike");
      // time reversal so that s_1 c_1 points to the upper sheet
      if (!opt.frame && data.s[0] * fam->frame.duals[0][0] < 0) {
        auto flip = [](Vec& v) { v[0] = -v[0]; };
        for (Vec& v : fam->frame.normals) flip(v);
        for (Vec& v : fam->frame.duals) flip(v);
        flip(fam->frame.axis);
      }
      if (opt.check_signs)
        for (int i = 0; i < n; ++i)
          if (data.s[i] * fam->frame.duals[i][0] <= 0)
            throw Error(ErrorCode::inconsistent_signs,
                        "s_" + std::to_string(i + 1) + " c_" + std::to_string(i + 1) + " is past-pointing");
    }
    for (int i = 0; i < n; ++i) a.push_back(project_to_model(sp, data.s[i] * fam->frame.duals[i], 1, opt.tol));
  }
  fam->omega = compute_omega(sp, fam->frame.axis, a);
  return fam;
}

Vec d_vector(const FlexFamily& fam, int i, const FlexParam& u) {
  const Space& sp = fam.data.space;
  if (sp.kind == Kind::euclidean) throw Error(ErrorCode::unsupported, "d_i(u) is defined for curved spaces");
  const int n = sp.n;
  auto [p, q] = flex_coefficients(fam.data.lambda[i], u);
  Vec d = Vec::Zero(sp.dim());
  for (int j = 0; j < n; ++j) d += fam.H(i, j) * fam.frame.duals[j];
  d += -p * fam.frame.normals[i] + q * fam.frame.axis;
  return d;
}

Configuration configuration(const FamilyPtr& fam, const FlexParam& u) {
  const SimplestTypeData& d = fam->data;
  const Space& sp = d.space;
  const int n = sp.n;
  Configuration c;
  c.space = sp;
  c.u = u;
  c.family = fam;
  c.axis = fam->frame.axis;
  c.omega = fam->omega;
  if (sp.kind == Kind::euclidean) {
    const EuclideanBase& base = *fam->euclidean_base;
    c.a = base.vertices;
    for (int i = 0; i < n; ++i) {
      auto [p, q] = flex_coefficients(d.lambda[i], u);
      Vec v = Vec::Zero(n);
      for (int j = 0; j < n; ++j) v += fam->H(i, j) / base.altitudes[j] * base.vertices[j];
      v += -p * fam->frame.normals[i] + q * fam->frame.axis;
      c.b.push_back(base.coefficients[i] * v);
    }
    return c;
  }
  for (int i = 0; i < n; ++i) c.a.push_back(project_to_model(sp, d.s[i] * fam->frame.duals[i], 1));
  for (int i = 0; i < n; ++i) {
    Vec di = d_vector(*fam, i, u);
    if (sp.kind == Kind::hyperbolic) {
      if (quadratic_form(sp, di) >= -1e-12)
        throw Error(ErrorCode::not_timelike, "d_" + std::to_string(i + 1) + "(" + u.str() + ") is not timelike");
      if (d.s_prime[i] * di[0] <= 0)
        throw Error(ErrorCode::inconsistent_signs,
                    "s'_" + std::to_string(i + 1) + " d_" + std::to_string(i + 1) + " is past-pointing");
    }
    c.b.push_back(project_to_model(sp, d.s_prime[i] * di, 1));
  }
  return c;
}

std::map<FaceId, double> edge_length_table(const Configuration& c) {
  std::map<FaceId, double> out;
  for (const FaceId& e : faces(c.n(), 1)) {
    auto v = c.vertices(e);
    out[e] = geodesic_distance(c.space, v[0], v[1]);
  }
  return out;
}

DualData dual_family(const SimplestTypeData& data) {
  const int n = data.space.n;
  DualData out;
  out.data.space = data.space;
  out.data.G.resize(n, n);
  out.data.lambda.resize(n);
  out.data.s.resize(n);
  out.data.s_prime.resize(n);
  out.perm.resize(n);
  for (int i = 0; i < n; ++i) {
    const int src = n - 1 - i;
    out.perm[i] = src;
    out.data.lambda[i] = 1.0 / data.lambda[src];
    out.data.s[i] = data.s[src];
    out.data.s_prime[i] = -data.s_prime[src];
    for (int j = 0; j < n; ++j) out.data.G(i, j) = data.G(src, n - 1 - j);
  }
  return out;
}

FamilyPtr build_dual(const FlexFamily& fam, const DualData& dual) {
  const int n = fam.data.space.n;
  Frame fr;
  for (int i = 0; i < n; ++i) fr.normals.push_back(fam.frame.normals[dual.perm[i]]);
  fr.axis = -fam.frame.axis;
  BuildOptions opt;
  opt.frame = &fr;
  return build(dual.data, opt);
}

double duality_residual(const FamilyPtr& fam, const std::vector<FlexParam>& samples) {
  const int n = fam->data.n();
  const DualData dd = dual_family(fam->data);
  const FamilyPtr df = build_dual(*fam, dd);
  double worst = 0.0;
  for (const FlexParam& u : samples) {
    const Configuration c = configuration(fam, u), cd = configuration(df, u.inverse());
    std::vector<Vec> P, Q;
    for (int i = 0; i < n; ++i) {
      P.push_back(c.a[dd.perm[i]]);
      Q.push_back(cd.a[i]);
    }
    for (int i = 0; i < n; ++i) {
      P.push_back(c.b[dd.perm[i]]);
      Q.push_back(cd.b[i]);
    }
    if (fam->data.space.kind == Kind::euclidean) {
      // Q ≈ scale * P + shift, scale from centred least squares, then undo it
      Vec pc = Vec::Zero(n), qc = Vec::Zero(n);
      for (int i = 0; i < 2 * n; ++i) {
        pc += P[i];
        qc += Q[i];
      }
      pc /= 2.0 * n;
      qc /= 2.0 * n;
      double num = 0.0, den = 0.0;
      for (int i = 0; i < 2 * n; ++i) {
        num += (Q[i] - qc).dot(P[i] - pc);
        den += (P[i] - pc).squaredNorm();
      }
      const double scale = num / den;
      for (int i = 0; i < 2 * n; ++i) Q[i] = (Q[i] - qc) / scale + pc;
    }
    for (int i = 0; i < 2 * n; ++i) worst = std::max(worst, (Q[i] - P[i]).norm());
  }
  return worst;
}

std::optional<std::pair<std::vector<int>, std::vector<int>>> derive_signs(Kind kind, const Mat& G,
                                                                          const Vec& lambda) {
  const int n = static_cast<int>(lambda.size());
  SimplestTypeData d;
  d.space = {kind, n};
  d.G = G;
  d.lambda = lambda;
  d.s.assign(n, 1);
  d.s_prime.assign(n, 1);
  if (kind == Kind::spherical) return std::make_pair(d.s, d.s_prime);
  try {
    Frame fr = realize_gram(d.space, G);
    Mat H = h_matrix(G, lambda);
    std::vector<int> s(n), sp(n);
    if (kind == Kind::euclidean) {
      Eigen::SelfAdjointEigenSolver<Mat> es(G);
      int drop = 0;
      for (int i = 1; i < n; ++i)
        if (std::abs(es.eigenvalues()[i]) < std::abs(es.eigenvalues()[drop])) drop = i;
      Vec w = es.eigenvectors().col(drop);
      for (int i = 0; i < n; ++i) s[i] = -sgn(w[i]);
      d.s = s;
      EuclideanBase base = euclidean_base(d, fr, H, false);
      for (int i = 0; i < n; ++i) sp[i] = sgn(base.coefficients[i]);
    } else {
      auto c = dual_basis(d.space, fr, G);
      for (int i = 0; i < n; ++i) {
        if (quadratic_form(d.space, c[i]) >= 0) return std::nullopt;
        s[i] = sgn(c[i][0]);
        Vec di = Vec::Zero(d.space.dim());
        for (int j = 0; j < n; ++j) di += H(i, j) * c[j];
        if (quadratic_form(d.space, di) >= 0) return std::nullopt;
        sp[i] = sgn(di[0]);
      }
    }
    for (int i = 0; i < n; ++i)
      if (s[i] == 0 || sp[i] == 0) return std::nullopt;
    return std::make_pair(s, sp);
  } catch (const Error&) {
    return std::nullopt;
  }
}

SimplestTypeData flip_all_signs(const SimplestTypeData& data) {
  SimplestTypeData out = data;
  for (int& v : out.s) v = -v;
  for (int& v : out.s_prime) v = -v;
  return out;
}

int orientation_sign(const Configuration& c, const Vec& x, const std::vector<Vec>& vecs) {
  std::vector<Vec> cols;
  if (c.space.curved()) cols.push_back(x);
  for (const Vec& v : vecs) cols.push_back(v);
  return c.omega * sgn(det_columns(cols));
}

}  // namespace flexcross
