#include "flexcross/measure.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numeric>

namespace flexcross {

double sphere_volume(int n) {
  if (n < 0) throw Error(ErrorCode::input, "sphere dimension must be >= 0");
  // exact low-dimensional values avoid a rounding step through tgamma
  switch (n) {
    case 0: return 2.0;
    case 1: return 2.0 * M_PI;
    case 2: return 4.0 * M_PI;
    case 3: return 2.0 * M_PI * M_PI;
    default: break;
  }
  return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

const char* to_string(VolumeMethod m) {
  switch (m) {
    case VolumeMethod::exact: return "exact";
    case VolumeMethod::quadrature: return "quadrature";
    case VolumeMethod::monte_carlo: return "monte-carlo";
  }
  return "?";
}

double reduce_mod(double x, double modulus) {
  double r = std::fmod(x, modulus);
  if (r < 0) r += modulus;
  if (r >= modulus) r -= modulus;
  return r;
}

double volume_distance(double x, double y, std::optional<double> modulus) {
  if (!modulus) return std::abs(x - y);
  double d = reduce_mod(x - y, *modulus);
  return std::min(d, *modulus - d);
}

namespace {

// ---------------------------------------------------------------- quadrature

struct Rule {
  Mat points;  // k x count, coordinates (t_1..t_k) in the standard simplex
  Vec weights;
};

template <int N>
std::pair<std::vector<double>, std::vector<double>> gauss_on_unit_interval() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  std::vector<double> xs, ws;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      xs.push_back(0.5);
      ws.push_back(0.5 * w[i]);
      continue;
    }
    xs.push_back(0.5 * (1.0 - x[i]));
    ws.push_back(0.5 * w[i]);
    xs.push_back(0.5 * (1.0 + x[i]));
    ws.push_back(0.5 * w[i]);
  }
  return {xs, ws};
}

Rule make_rule(int k, int which) {
  auto [x, w] = which == 0 ? gauss_on_unit_interval<10>() : gauss_on_unit_interval<15>();
  const int N = static_cast<int>(x.size());
  int count = 1;
  for (int d = 0; d < k; ++d) count *= N;
  Rule r;
  r.points.resize(k, count);
  r.weights.resize(count);
  std::vector<int> idx(k, 0);
  for (int p = 0; p < count; ++p) {
    int rem_index = p;
    for (int d = 0; d < k; ++d) {
      idx[d] = rem_index % N;
      rem_index /= N;
    }
    // collapsed (Duffy) coordinates: cube -> simplex
    double rem = 1.0, jac = 1.0, wt = 1.0;
    for (int d = 0; d < k; ++d) {
      const double xi = x[idx[d]];
      r.points(d, p) = rem * xi;
      jac *= rem;
      rem *= (1.0 - xi);
      wt *= w[idx[d]];
    }
    r.weights[p] = wt * jac;
  }
  return r;
}

const Rule& rule(int k, int which) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, Rule> rules;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(k, which);
  auto it = rules.find(key);
  if (it == rules.end()) it = rules.emplace(key, make_rule(k, which)).first;
  return it->second;
}

double curved_piece(const Space& sp, const Mat& V, int which) {
  const int k = static_cast<int>(V.cols()) - 1;
  const Rule& r = rule(k, which);
  Vec diag = form_diagonal(sp);
  Mat Gm = V.transpose() * diag.asDiagonal() * V;
  const double dt = std::sqrt(std::abs(Gm.determinant()));
  if (dt == 0.0) return 0.0;
  const double expo = 0.5 * (k + 1);
  double sum = 0.0;
  const int count = static_cast<int>(r.weights.size());
  Vec X(V.rows());
  for (int p = 0; p < count; ++p) {
    double t0 = 1.0;
    X = Vec::Zero(V.rows());
    for (int d = 0; d < k; ++d) {
      const double t = r.points(d, p);
      X += t * V.col(d + 1);
      t0 -= t;
    }
    X += t0 * V.col(0);
    double q = X.squaredNorm();
    if (sp.kind == Kind::hyperbolic) q = -(q - 2.0 * X[0] * X[0]);
    sum += r.weights[p] / std::pow(q, expo);
  }
  return dt * sum;
}

Vec model_midpoint(const Space& sp, const Vec& a, const Vec& b) { return project_to_model(sp, a + b, 1); }

void curved_adaptive(const Space& sp, const Mat& V, double tol, int depth, int max_depth, double& value,
                     double& err) {
  const double lo = curved_piece(sp, V, 0);
  const double hi = curved_piece(sp, V, 1);
  const double diff = std::abs(hi - lo);
  if (diff <= tol || depth >= max_depth) {
    value += hi;
    err += diff;
    return;
  }
  const int m = static_cast<int>(V.cols());
  int bi = 0, bj = 1;
  double best = -1.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) {
      double d = geodesic_distance(sp, V.col(i), V.col(j));
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  Vec w = model_midpoint(sp, V.col(bi), V.col(bj));
  Mat V1 = V, V2 = V;
  V1.col(bi) = w;
  V2.col(bj) = w;
  curved_adaptive(sp, V1, 0.5 * tol, depth + 1, max_depth, value, err);
  curved_adaptive(sp, V2, 0.5 * tol, depth + 1, max_depth, value, err);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double hyperbolic_vertex_angle(const Space& sp, const Vec& a, const Vec& b, const Vec& c) {
  Vec tb = tangent_at(sp, a, b);
  Vec tc = tangent_at(sp, a, c);
  const double bb = quadratic_form(sp, tb), cc = quadratic_form(sp, tc), bc = bilinear_form(sp, tb, tc);
  return std::atan2(std::sqrt(std::max(0.0, bb * cc - bc * bc)), bc);
}

// sqrt of the Gram determinant of the vertex vectors (curved) or edge vectors (flat)
double gram_measure(const Space& sp, const std::vector<Vec>& v, double& scale) {
  const int m = static_cast<int>(v.size());
  Vec diag = form_diagonal(sp);
  if (sp.kind == Kind::euclidean) {
    Mat E(v[0].size(), m - 1);
    scale = 1.0;
    for (int j = 1; j < m; ++j) {
      E.col(j - 1) = v[j] - v[0];
      scale *= std::max(1e-300, E.col(j - 1).norm());
    }
    return std::sqrt(std::max(0.0, (E.transpose() * E).determinant()));
  }
  Mat V(v[0].size(), m);
  scale = 1.0;
  for (int j = 0; j < m; ++j) {
    V.col(j) = v[j];
    scale *= v[j].squaredNorm();
  }
  scale = std::sqrt(scale);
  return std::sqrt(std::abs((V.transpose() * diag.asDiagonal() * V).determinant()));
}

VolumeEstimate simplex_volume_impl(const Space& sp, const std::vector<Vec>& v, const QuadratureOptions& opt,
                                   bool allow_degenerate) {
  const int k = static_cast<int>(v.size()) - 1;
  if (k < 0) throw Error(ErrorCode::input, "simplex needs at least one vertex");
  for (const Vec& p : v)
    if (p.size() != sp.dim()) throw Error(ErrorCode::input, "vertex dimension mismatch");
  if (k == 0) return {1.0, 0.0, VolumeMethod::exact};
  double scale = 1.0;
  const double g = gram_measure(sp, v, scale);
  if (!(g > 1e-12 * scale)) {
    if (allow_degenerate) return {0.0, 0.0, VolumeMethod::exact};
    throw Error(ErrorCode::degeneracy, "simplex vertices are dependent");
  }
  if (sp.kind == Kind::euclidean) return {g / factorial(k), 0.0, VolumeMethod::exact};
  if (k == 1) return {geodesic_distance(sp, v[0], v[1]), 0.0, VolumeMethod::exact};
  if (k == 2) {
    if (sp.kind == Kind::spherical) {
      const double den = 1.0 + v[0].dot(v[1]) + v[1].dot(v[2]) + v[2].dot(v[0]);
      return {2.0 * std::atan2(g, den), 0.0, VolumeMethod::exact};
    }
    const double s = hyperbolic_vertex_angle(sp, v[0], v[1], v[2]) + hyperbolic_vertex_angle(sp, v[1], v[2], v[0]) +
                     hyperbolic_vertex_angle(sp, v[2], v[0], v[1]);
    return {std::max(0.0, M_PI - s), 0.0, VolumeMethod::exact};
  }
  double tol = opt.abs_tol > 0 ? opt.abs_tol : (k == 3 ? 1e-10 : 1e-8);
  Mat V(sp.dim(), k + 1);
  for (int j = 0; j <= k; ++j) V.col(j) = v[j];
  double value = 0.0, err = 0.0;
  curved_adaptive(sp, V, tol, 0, opt.max_depth, value, err);
  return {value, err, VolumeMethod::quadrature};
}

}  // namespace

VolumeEstimate simplex_volume(const Space& sp, const std::vector<Vec>& v, const QuadratureOptions& opt) {
  return simplex_volume_impl(sp, v, opt, false);
}

VolumeEstimate simplex_volume_or_zero(const Space& sp, const std::vector<Vec>& v, const QuadratureOptions& opt) {
  return simplex_volume_impl(sp, v, opt, true);
}

FaceVolumeCache::FaceVolumeCache(FamilyPtr family, QuadratureOptions opt)
    : family_(std::move(family)), opt_(opt), reference_(configuration(family_, FlexParam::finite(1.0))) {}

VolumeEstimate FaceVolumeCache::get(const FaceId& face) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(face);
    if (it != cache_.end()) return it->second;
  }
  VolumeEstimate v = face_volume(reference_, face, opt_);
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(face, v);
  return v;
}

VolumeEstimate face_volume(const Configuration& c, const FaceId& face, const QuadratureOptions& opt) {
  if (face.empty()) throw Error(ErrorCode::input, "the empty face has no volume");
  return simplex_volume(c.space, c.vertices(face), opt);
}

// ------------------------------------------------------------ winding number

namespace {

int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

enum class Crossing { none, hit, degenerate };

struct Solve {
  Vec sol;
  bool ok = false;
};

Solve solve_square(const Mat& M, const Vec& rhs) {
  Eigen::FullPivLU<Mat> lu(M);
  Solve s;
  // near-singular systems mean the path grazes a facet's plane
  double maxpiv = lu.matrixLU().diagonal().cwiseAbs().maxCoeff();
  double minpiv = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(minpiv > 1e-11 * std::max(1.0, maxpiv))) return s;
  s.sol = lu.solve(rhs);
  s.ok = true;
  return s;
}

constexpr double kGeneric = 1e-9;

// Signed crossings of the chord path p -> x (spherical) with the facet cones.
// Returns false when the path is not generic.
bool spherical_segment(const Configuration& c, const Vec& p, const Vec& x, int& kappa) {
  const int n = c.n();
  const Vec dir = x - p;
  for (const FaceId& F : facets(n)) {
    std::vector<Vec> v = c.vertices(F);
    Mat M(n + 1, n + 1);
    for (int j = 0; j < n; ++j) M.col(j) = v[j];
    M.col(n) = -dir;
    Solve s = solve_square(M, p);
    if (!s.ok) {
      // the chord is parallel to the facet's span; generic paths avoid this
      std::vector<Vec> cols(v.begin(), v.end());
      cols.push_back(p);
      if (std::abs(det_columns(cols)) < 1e-12) return false;
      continue;
    }
    const double tau = s.sol[n];
    const Vec beta = s.sol.head(n);
    const double bscale = beta.cwiseAbs().sum();
    if (tau < -kGeneric || tau > 1.0 + kGeneric) continue;
    if (beta.minCoeff() < -kGeneric * bscale) continue;
    if (beta.minCoeff() <= kGeneric * bscale || tau <= kGeneric || tau >= 1.0 - kGeneric) return false;
    std::vector<Vec> cols{dir};
    cols.insert(cols.end(), v.begin(), v.end());
    const int eps = facet_orientation_sign(n, F.I, F.J);
    kappa += eps * c.omega * sgn(det_columns(cols));
  }
  return true;
}

bool ray_crossings(const Configuration& c, const Vec& x, const Vec& d, int& kappa) {
  const int n = c.n();
  const bool hyper = c.space.kind == Kind::hyperbolic;
  for (const FaceId& F : facets(n)) {
    std::vector<Vec> v = c.vertices(F);
    const int eps = facet_orientation_sign(n, F.I, F.J);
    Mat M;
    Vec rhs;
    if (hyper) {
      // Σ β_j v_j - γ d = x, crossing for β > 0 and 0 < γ < 1
      M.resize(n + 1, n + 1);
      for (int j = 0; j < n; ++j) M.col(j) = v[j];
      M.col(n) = -d;
      rhs = x;
    } else {
      // Σ β_j v_j - t d = x, Σ β_j = 1, crossing for β > 0 and t > 0
      M = Mat::Zero(n + 1, n + 1);
      for (int j = 0; j < n; ++j) {
        M.block(0, j, n, 1) = v[j];
        M(n, j) = 1.0;
      }
      M.block(0, n, n, 1) = -d;
      rhs = Vec::Zero(n + 1);
      rhs.head(n) = x;
      rhs[n] = 1.0;
    }
    Solve s = solve_square(M, rhs);
    if (!s.ok) {
      continue;  // ray parallel to the facet plane
    }
    const double t = s.sol[n];
    const Vec beta = s.sol.head(n);
    const double bscale = beta.cwiseAbs().sum();
    if (t < -kGeneric) continue;
    if (hyper && t > 1.0 + kGeneric) continue;
    if (beta.minCoeff() < -kGeneric * bscale) continue;
    if (beta.minCoeff() <= kGeneric * bscale || t <= kGeneric || (hyper && t >= 1.0 - kGeneric)) return false;
    std::vector<Vec> cols{d};
    if (hyper) {
      cols.insert(cols.end(), v.begin(), v.end());
      kappa -= eps * c.omega * sgn(det_columns(cols));
    } else {
      for (int j = 1; j < n; ++j) cols.push_back(v[j] - v[0]);
      kappa += eps * c.omega * sgn(det_columns(cols));
    }
  }
  return true;
}

Vec random_unit(int dim, Rng& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = N(rng);
  return v / v.norm();
}

}  // namespace

int winding_number(const Configuration& c, const Vec& x, const std::optional<Vec>& base, Rng& rng) {
  const Space& sp = c.space;
  const int dim = sp.dim();
  if (x.size() != dim) throw Error(ErrorCode::input, "point dimension mismatch");
  constexpr int kRetries = 32;
  if (sp.kind == Kind::spherical) {
    if (!base) throw Error(ErrorCode::input, "spherical winding numbers need a base point");
    for (int attempt = 0; attempt < kRetries; ++attempt) {
      int kappa = 0;
      if (attempt == 0 && (*base + x).norm() > 1e-6) {
        if (spherical_segment(c, *base, x, kappa)) return kappa;
        continue;
      }
      // detour through a random waypoint
      Vec z = random_unit(dim, rng);
      if ((*base + z).norm() < 1e-3 || (z + x).norm() < 1e-3) continue;
      if (spherical_segment(c, *base, z, kappa) && spherical_segment(c, z, x, kappa)) return kappa;
    }
    throw Error(ErrorCode::indeterminate, "no generic path found (point too close to the surface?)");
  }
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    Vec d = random_unit(dim, rng);
    if (sp.kind == Kind::hyperbolic) {
      d = tangent_at(sp, x, d);
      d /= std::sqrt(quadratic_form(sp, d));
    }
    int kappa = 0;
    if (ray_crossings(c, x, d, kappa)) return kappa;
  }
  throw Error(ErrorCode::indeterminate, "no generic ray found (point too close to the surface?)");
}

// --------------------------------------------------------- generalized volume

namespace {

// -o inside the closed cone of a facet makes the geodesic join undefined.
bool antipode_in_cone(const std::vector<Vec>& v, const Vec& o) {
  const int n = static_cast<int>(v.size());
  Mat M(o.size(), n);
  for (int j = 0; j < n; ++j) M.col(j) = v[j];
  Vec beta = M.colPivHouseholderQr().solve(-o);
  double res = (M * beta + o).norm();
  return res < 1e-6 && beta.minCoeff() > -1e-6;
}

struct Apex {
  Vec point;
  int vertex_id = -1;
  std::string label;
};

}  // namespace

GeneralizedVolume generalized_volume(const Configuration& c, const DecompositionOptions& opt) {
  const Space& sp = c.space;
  const int n = c.n();
  std::vector<Apex> candidates;
  for (int id = 0; id < 2 * n; ++id)
    candidates.push_back({c.vertex(id), id, (id < n ? "a" : "b") + std::to_string(id % n + 1)});
  if (sp.kind == Kind::spherical) {
    candidates.push_back({c.axis, -1, "m"});
    candidates.push_back({-c.axis, -1, "-m"});
    Rng rng(split_seed(opt.seed, "generalized_volume.apex"));
    for (int t = 0; t < 8; ++t) candidates.push_back({random_unit(sp.dim(), rng), -1, "random"});
  }
  const auto all = facets(n);
  for (const Apex& apex : candidates) {
    const Vec& o = apex.point;
    bool valid = true;
    if (sp.kind == Kind::spherical) {
      for (const FaceId& F : all) {
        if (apex.vertex_id >= 0 && F.vertex_ids(n)[apex.vertex_id % n] == apex.vertex_id) continue;
        if (antipode_in_cone(c.vertices(F), o)) {
          valid = false;
          break;
        }
      }
    }
    if (!valid) continue;
    double total = 0.0, err = 0.0;
    for (const FaceId& F : all) {
      if (apex.vertex_id >= 0 && F.vertex_ids(n)[apex.vertex_id % n] == apex.vertex_id) continue;
      std::vector<Vec> v = c.vertices(F);
      std::vector<Vec> cols;
      double scale = 1.0;
      if (sp.kind == Kind::euclidean) {
        for (const Vec& w : v) {
          cols.push_back(w - o);
          scale *= std::max(1e-300, (w - o).norm());
        }
      } else {
        cols.push_back(o);
        scale = o.norm();
        for (const Vec& w : v) {
          cols.push_back(w);
          scale *= w.norm();
        }
      }
      const double det = det_columns(cols);
      if (std::abs(det) <= 1e-13 * scale) continue;  // flat cone: measure zero
      std::vector<Vec> simplex{o};
      simplex.insert(simplex.end(), v.begin(), v.end());
      VolumeEstimate ve = simplex_volume_or_zero(sp, simplex, opt.quad);
      const int eps = facet_orientation_sign(n, F.I, F.J);
      total += eps * c.omega * sgn(det) * ve.value;
      err += ve.abs_error;
    }
    GeneralizedVolume gv;
    gv.abs_error = err;
    gv.note = "apex " + apex.label;
    if (sp.kind == Kind::spherical) {
      const double sig = sphere_volume(n);
      gv.modulus = sig;
      gv.value = reduce_mod(total, sig);
    } else {
      gv.value = total;
    }
    return gv;
  }
  throw Error(ErrorCode::degeneracy, "every apex candidate is degenerate");
}

GeneralizedVolume schlafli_volume(FaceVolumeCache& cache, const FlexParam& u) {
  const SimplestTypeData& d = cache.family()->data;
  const Space& sp = d.space;
  const int n = sp.n;
  if (sp.kind == Kind::euclidean) throw Error(ErrorCode::unsupported, "Schläfli route needs a curved space");
  if (n < 3) throw Error(ErrorCode::unsupported, "Schläfli route needs n >= 3");
  const double eps = sp.kind == Kind::spherical ? 1.0 : -1.0;
  const double sig = sphere_volume(n);
  bool all_minus = true;
  for (int i = 0; i < n; ++i) all_minus = all_minus && d.product(i) == -1;
  double v0 = (sp.kind == Kind::spherical && all_minus) ? 0.5 * sig : 0.0;
  double inc = 0.0, err = 0.0;
  for (const FaceId& F : ridges(n)) {
    const double lf = lambda_face(d, F);
    const double dpsi = 2.0 * (u.infinite ? std::copysign(M_PI / 2, lf) : std::atan(lf * u.value));
    VolumeEstimate vf = cache.get(F);
    inc += vf.value * dpsi;
    err += vf.abs_error * std::abs(dpsi);
  }
  GeneralizedVolume gv;
  gv.value = v0 + eps / (n - 1) * inc;
  gv.abs_error = err / (n - 1);
  if (sp.kind == Kind::spherical) {
    gv.modulus = sig;
    gv.value = reduce_mod(gv.value, sig);
  }
  return gv;
}

GeneralizedVolume closed_form_volume(const SimplestTypeData& d, const FlexParam& u) {
  GeneralizedVolume gv;
  if (d.space.kind != Kind::spherical) return gv;
  const int n = d.n();
  const double sig = sphere_volume(n);
  gv.modulus = sig;
  auto at = [&](int i) { return u.infinite ? M_PI / 2 : std::atan(d.lambda[i] * u.value); };
  int split = 0;  // number of leading -1 products
  while (split < n && d.product(split) == -1) ++split;
  bool rest_plus = true;
  for (int i = split; i < n; ++i) rest_plus = rest_plus && d.product(i) == 1;
  double v = 0.0;
  if (!rest_plus) {
    v = 0.0;
    gv.note = "zero pattern";
  } else if (split == 0) {
    v = d.s[0] * sig / M_PI * at(0);
    gv.note = "all products +1";
  } else if (split == n) {
    v = 0.5 * sig + d.s[n - 1] * sig / M_PI * at(n - 1);
    gv.note = "all products -1";
  } else {
    v = sig / M_PI * (d.s[split - 1] * at(split - 1) + d.s[split] * at(split));
    gv.note = "split pattern at k=" + std::to_string(split);
  }
  gv.value = reduce_mod(v, sig);
  return gv;
}

std::uint32_t y_set(const SimplestTypeData& d, YSet which) {
  std::uint32_t Y = 0;
  for (int i = 0; i < d.n(); ++i)
    if (d.product(i) == (which == YSet::plus ? 1 : -1)) Y |= 1u << i;
  return Y;
}

RelationResidual facet_relation_residual(FaceVolumeCache& cache, YSet which) {
  const SimplestTypeData& d = cache.family()->data;
  const int n = d.n();
  const std::uint32_t Y = y_set(d, which);
  double sum = 0.0, err = 0.0;
  for (const FaceId& F : facets(n)) {
    VolumeEstimate v = cache.get(F);
    sum += (std::popcount(F.J & Y) % 2 ? -1.0 : 1.0) * v.value;
    err += v.abs_error;
  }
  RelationResidual r;
  r.rhs = (d.space.kind == Kind::spherical && Y == 0) ? sphere_volume(n - 1) : 0.0;
  r.residual = std::abs(sum - r.rhs);
  r.bound = err;
  return r;
}

RelationResidual codim2_relation_residual(FaceVolumeCache& cache, int k) {
  const SimplestTypeData& d = cache.family()->data;
  const int n = d.n();
  if (n < 2 || (n < 3 && d.space.kind != Kind::spherical))
    throw Error(ErrorCode::unsupported, "codimension-2 relations need n >= 3 (or spherical n = 2)");
  const std::uint32_t X = X_set(d, k);
  double sum = 0.0, err = 0.0;
  for (const FaceId& F : facets_without(n, k)) {
    VolumeEstimate v = cache.get(F);
    sum += (std::popcount(F.J & X) % 2 ? -1.0 : 1.0) * v.value;
    err += v.abs_error;
  }
  RelationResidual r;
  r.rhs = (d.space.kind == Kind::spherical && X == 0) ? sphere_volume(n - 2) : 0.0;
  r.residual = std::abs(sum - r.rhs);
  r.bound = err;
  return r;
}

SimplestTypeData antipode_flip(const SimplestTypeData& d, int vertex_id) {
  if (d.space.kind != Kind::spherical) throw Error(ErrorCode::unsupported, "antipodes exist only in S^n");
  const int n = d.n();
  if (vertex_id < 0 || vertex_id >= 2 * n) throw Error(ErrorCode::input, "vertex id out of range");
  SimplestTypeData out = d;
  if (vertex_id < n) out.s[vertex_id] = -out.s[vertex_id];
  else out.s_prime[vertex_id - n] = -out.s_prime[vertex_id - n];
  return out;
}

std::vector<int> modified_bellows_witness(const SimplestTypeData& d) {
  if (d.space.kind != Kind::spherical) throw Error(ErrorCode::unsupported, "modified bellows is spherical");
  if (d.n() < 2) throw Error(ErrorCode::input, "n >= 2 required");
  const int n = d.n();
  std::vector<int> flips;
  if (d.product(0) != 1) flips.push_back(n + 0);
  if (d.product(1) != -1) flips.push_back(n + 1);
  return flips;
}

}  // namespace flexcross
