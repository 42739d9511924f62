#include "flexcross/generate.hpp"

#include <bit>
#include <cmath>

namespace flexcross {

std::uint64_t split_seed(std::uint64_t master, const std::string& label) {
  // FNV-1a over the label, mixed into the master seed with splitmix64
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::uint64_t z = master ^ h;
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

double min_principal_minor(const Mat& G, int max_size) {
  const int n = static_cast<int>(G.rows());
  double best = 1e300;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    int sz = std::popcount(mask);
    if (sz < 2 || sz > max_size) continue;
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) idx.push_back(i);
    Mat sub(sz, sz);
    for (int a = 0; a < sz; ++a)
      for (int b = 0; b < sz; ++b) sub(a, b) = G(idx[a], idx[b]);
    best = std::min(best, sub.determinant());
  }
  return best;
}

Mat gram_of(const std::vector<Vec>& v, const Space& sp) {
  const int n = static_cast<int>(v.size());
  Mat G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = bilinear_form(sp, v[i], v[j]);
  return G;
}

// Unit normals of a regular simplex centred at the origin of R^d (d + 1 of them).
std::vector<Vec> simplex_normals(int d) {
  std::vector<Vec> v;
  Mat P = Mat::Identity(d + 1, d + 1) - Mat::Constant(d + 1, d + 1, 1.0 / (d + 1));
  Eigen::SelfAdjointEigenSolver<Mat> es(P);
  const Mat B = es.eigenvectors().rightCols(d);  // orthonormal basis of the sum-zero hyperplane
  for (int i = 0; i <= d; ++i) v.push_back(B.row(i).transpose().normalized());
  return v;
}

std::vector<Vec> spread_base(Kind kind, int n, int dim) {
  std::vector<Vec> base;
  if (kind == Kind::spherical) {
    for (int i = 0; i < n; ++i) base.push_back(Vec::Unit(dim, i));
  } else if (kind == Kind::euclidean) {
    base = simplex_normals(n - 1);
  } else {
    for (const Vec& w : simplex_normals(n - 1)) {
      Vec x(dim);
      x[0] = 0.6 / n;  // a larger tilt makes proper principal minors negative
      x.tail(n - 1) = w;
      base.push_back(x);
    }
  }
  return base;
}

Mat random_gram(Kind kind, int n, Rng& rng, const GeneratorOptions& opt) {
  std::normal_distribution<double> N(0.0, 1.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<Vec> v;
    Space sp{Kind::spherical, 0};
    int dim = 0;
    switch (kind) {
      case Kind::spherical: dim = n; sp = {Kind::euclidean, n}; break;
      case Kind::euclidean: dim = n - 1; sp = {Kind::euclidean, n - 1}; break;
      case Kind::hyperbolic: dim = n; sp = {Kind::hyperbolic, n - 1}; break;
    }
    // Above n = 5 unstructured samples almost never clear the minor margin, so
    // perturb a well-spread base instead: an orthonormal frame (spherical) or the
    // normals of a regular simplex in the spatial slice (euclidean, hyperbolic).
    const bool structured = n > 5;
    const std::vector<Vec> base = structured ? spread_base(kind, n, dim) : std::vector<Vec>{};
    const double spread = 0.5 / std::sqrt(static_cast<double>(n));
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      Vec x(dim);
      for (int k = 0; k < dim; ++k) x[k] = N(rng);
      if (structured) {
        if (kind == Kind::hyperbolic) x[0] *= 0.6 / n;
        x = base[i] + spread * x;
      }
      else if (kind == Kind::hyperbolic) x[0] *= 0.35;
      double q = quadratic_form(sp, x);
      if (q < 0.2 * x.squaredNorm()) ok = false;
      else v.push_back(x / std::sqrt(q));
    }
    if (!ok) continue;
    Mat G = gram_of(v, sp);
    for (int i = 0; i < n; ++i) G(i, i) = 1.0;
    G = 0.5 * (G + G.transpose());
    if (kind == Kind::euclidean) {
      // enforce exact rank n-1 numerically by projecting out the smallest eigenvalue
      Eigen::SelfAdjointEigenSolver<Mat> es(G);
      Vec w = es.eigenvalues();
      w[0] = 0.0;
      G = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
      for (int i = 0; i < n; ++i) G(i, i) = 1.0;
      G = 0.5 * (G + G.transpose());
      // |off-diagonal| >= 1 would not describe a simplex
      if (n == 2 && std::abs(std::abs(G(0, 1)) - 1.0) > 1e-12) continue;
    }
    const int max_minor = (kind == Kind::spherical) ? n : n - 1;
    if (min_principal_minor(G, max_minor) < opt.minor_margin) continue;
    if (kind == Kind::spherical && G.determinant() < opt.minor_margin) continue;
    if (kind == Kind::hyperbolic && G.determinant() > -opt.minor_margin) continue;
    if (!gram_condition_violation(kind, G, 1e-10).empty()) continue;
    return G;
  }
  throw Error(ErrorCode::indeterminate, "random_gram: no admissible matrix found");
}

bool well_conditioned(const SimplestTypeData& d, const GeneratorOptions& opt) {
  try {
    FamilyPtr fam = build(d);
    const Space& sp = d.space;
    if (sp.kind == Kind::hyperbolic) {
      for (int i = 0; i < d.n(); ++i) {
        const Vec& c = fam->frame.duals[i];
        if (-quadratic_form(sp, c) < opt.timelike_margin * c.squaredNorm()) return false;
        Vec di = d_vector(*fam, i, FlexParam::finite(0.0));
        if (-quadratic_form(sp, di) < opt.timelike_margin * di.squaredNorm()) return false;
      }
    }
    if (sp.kind == Kind::euclidean) {
      const auto& base = *fam->euclidean_base;
      for (int i = 0; i < d.n(); ++i) {
        double mag = 0.0;
        for (int j = 0; j < d.n(); ++j) mag += std::abs(fam->H(i, j) / base.altitudes[j]);
        if (std::abs(1.0 / base.coefficients[i]) < 0.02 * mag) return false;
        if (std::abs(base.coefficients[i]) > 50.0) return false;
      }
    }
    // every edge at both flat positions and at u = 1 should be well away from 0
    for (FlexParam u : {FlexParam::finite(0.0), FlexParam::finite(1.0), FlexParam::inf()}) {
      Configuration c = configuration(fam, u);
      for (auto& [e, len] : edge_length_table(c)) {
        if (!(len > 0.05)) return false;
        if (sp.kind == Kind::spherical && len > M_PI - 0.05) return false;
        if (sp.kind != Kind::spherical && len > 20.0) return false;
      }
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

SimplestTypeData random_data(Kind kind, int n, Rng& rng, const GeneratorOptions& opt) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    SimplestTypeData d;
    d.space = {kind, n};
    d.G = random_gram(kind, n, rng, opt);
    d.lambda.resize(n);
    double l = opt.lambda_min * (1.0 + U(rng));
    for (int i = 0; i < n; ++i) {
      d.lambda[i] = l;
      l *= opt.lambda_ratio_min + (opt.lambda_ratio_max - opt.lambda_ratio_min) * U(rng);
    }
    if (kind == Kind::spherical) {
      d.s.resize(n);
      d.s_prime.resize(n);
      for (int i = 0; i < n; ++i) {
        d.s[i] = U(rng) < 0.5 ? -1 : 1;
        int p = opt.products.empty() ? (U(rng) < 0.5 ? -1 : 1) : opt.products[i];
        d.s_prime[i] = p * d.s[i];
      }
    } else {
      auto signs = derive_signs(kind, d.G, d.lambda);
      if (!signs) continue;
      d.s = signs->first;
      d.s_prime = signs->second;
      if (U(rng) < 0.5) d = flip_all_signs(d);
    }
    if (!validate_data(d).empty()) continue;
    if (!well_conditioned(d, opt)) continue;
    return d;
  }
  throw Error(ErrorCode::indeterminate, "random_data: no well-conditioned family found");
}

SimplestTypeData identity_data(int n, const std::vector<double>& lambda, int s, int s_prime) {
  SimplestTypeData d;
  d.space = {Kind::spherical, n};
  d.G = Mat::Identity(n, n);
  d.lambda = Eigen::Map<const Vec>(lambda.data(), static_cast<Eigen::Index>(lambda.size()));
  d.s.assign(n, s);
  d.s_prime.assign(n, s_prime);
  return d;
}

std::vector<FlexParam> sample_params(int count, Rng& rng, bool include_flat) {
  std::vector<FlexParam> out;
  if (include_flat) {
    out.push_back(FlexParam::finite(0.0));
    out.push_back(FlexParam::inf());
  }
  std::uniform_real_distribution<double> U(-2.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  while (static_cast<int>(out.size()) < count) {
    double mag = std::pow(10.0, U(rng));
    out.push_back(FlexParam::finite(coin(rng) < 0.5 ? -mag : mag));
  }
  return out;
}

}  // namespace flexcross
