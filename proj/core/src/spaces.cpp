#include "flexcross/spaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace flexcross {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::input: return "input error";
    case ErrorCode::invalid_point: return "invalid point";
    case ErrorCode::not_timelike: return "not timelike";
    case ErrorCode::invalid_data: return "invalid data";
    case ErrorCode::degenerate_data: return "degenerate data";
    case ErrorCode::inconsistent_signs: return "inconsistent signs";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::degeneracy: return "degeneracy";
    case ErrorCode::indeterminate: return "indeterminate";
    case ErrorCode::concurrency_failure: return "concurrency failure";
    case ErrorCode::classification: return "classification error";
    case ErrorCode::not_applicable: return "not applicable";
    case ErrorCode::pole: return "pole error";
    case ErrorCode::io: return "i/o error";
  }
  return "error";
}

const char* to_string(Kind kind) {
  switch (kind) {
    case Kind::euclidean: return "euclidean";
    case Kind::spherical: return "spherical";
    case Kind::hyperbolic: return "hyperbolic";
  }
  return "?";
}

Kind kind_from_string(const std::string& name) {
  if (name == "euclidean") return Kind::euclidean;
  if (name == "spherical") return Kind::spherical;
  if (name == "hyperbolic") return Kind::hyperbolic;
  throw Error(ErrorCode::input, "unknown space '" + name + "'");
}

static void check_dim(const Space& space, const Vec& x) {
  if (x.size() != space.dim())
    throw Error(ErrorCode::input, "vector of dimension " + std::to_string(x.size()) +
                                      ", expected " + std::to_string(space.dim()));
}

double bilinear_form(const Space& space, const Vec& x, const Vec& y) {
  check_dim(space, x);
  check_dim(space, y);
  double s = x.dot(y);
  if (space.kind == Kind::hyperbolic) s -= 2.0 * x[0] * y[0];
  return s;
}

double quadratic_form(const Space& space, const Vec& x) { return bilinear_form(space, x, x); }

Vec form_diagonal(const Space& space) {
  Vec d = Vec::Ones(space.dim());
  if (space.kind == Kind::hyperbolic) d[0] = -1.0;
  return d;
}

double geodesic_distance(const Space& space, const Vec& p, const Vec& q, const Tolerances& tol) {
  switch (space.kind) {
    case Kind::euclidean:
      check_dim(space, p);
      check_dim(space, q);
      return (p - q).norm();
    case Kind::spherical: {
      double c = bilinear_form(space, p, q);
      if (c > 1.0 && c < 1.0 + tol.clamp) c = 1.0;
      if (c < -1.0 && c > -1.0 - tol.clamp) c = -1.0;
      c = std::clamp(c, -1.0, 1.0);
      // acos loses half the digits near 0; the chord form does not.
      double chord = (p - q).norm();
      if (c > 0.9) return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
      return std::acos(c);
    }
    case Kind::hyperbolic: {
      double c = -bilinear_form(space, p, q);
      if (c < 1.0 - tol.hyperbolic_dist)
        throw Error(ErrorCode::invalid_point, "-<p,q> < 1 for hyperbolic points");
      if (c < 1.0) c = 1.0;
      if (c < 1.1) {
        // arcosh(c) = 2 asinh(|p-q|/2) for points of the hyperboloid.
        double chord2 = quadratic_form(space, p - q);
        return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, chord2)));
      }
      return std::acosh(c);
    }
  }
  return 0.0;
}

Vec project_to_model(const Space& space, const Vec& v, int sign, const Tolerances& tol) {
  check_dim(space, v);
  if (!v.allFinite()) throw Error(ErrorCode::input, "non-finite vector");
  switch (space.kind) {
    case Kind::euclidean:
      return v;
    case Kind::spherical: {
      double q = quadratic_form(space, v);
      if (q <= 0.0) throw Error(ErrorCode::degeneracy, "zero vector cannot be projected to the sphere");
      return (sign >= 0 ? 1.0 : -1.0) * v / std::sqrt(q);
    }
    case Kind::hyperbolic: {
      double q = quadratic_form(space, v);
      if (q >= -tol.timelike) throw Error(ErrorCode::not_timelike, "vector is not timelike");
      Vec w = v / std::sqrt(-q);
      if (w[0] < 0) w = -w;
      return w;
    }
  }
  return v;
}

bool is_model_point(const Space& space, const Vec& v, double tol) {
  if (v.size() != space.dim() || !v.allFinite()) return false;
  switch (space.kind) {
    case Kind::euclidean: return true;
    case Kind::spherical: return std::abs(quadratic_form(space, v) - 1.0) <= tol;
    case Kind::hyperbolic: return std::abs(quadratic_form(space, v) + 1.0) <= tol && v[0] > 0;
  }
  return false;
}

Vec tangent_at(const Space& space, const Vec& x, const Vec& v) {
  if (space.kind == Kind::euclidean) return v;
  return v - bilinear_form(space, x, v) / quadratic_form(space, x) * x;
}

std::vector<Vec> orthonormalize(const Space& space, const std::vector<Vec>& vecs, double tol) {
  std::vector<Vec> out;
  for (const Vec& v : vecs) {
    Vec w = v;
    // two passes keep orthogonality at machine precision
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& o : out) w -= bilinear_form(space, o, w) * o;
    double q = quadratic_form(space, w);
    double ref = std::max(1e-300, std::abs(quadratic_form(space, v)) + v.squaredNorm());
    if (q <= tol * tol * ref) continue;
    out.push_back(w / std::sqrt(q));
  }
  return out;
}

std::vector<Vec> orthogonal_complement(const Space& space, const std::vector<Vec>& span) {
  const int d = space.dim();
  if (span.empty()) {
    std::vector<Vec> all;
    for (int i = 0; i < d; ++i) all.push_back(Vec::Unit(d, i));
    return all;
  }
  Mat rows(span.size(), d);
  Vec diag = form_diagonal(space);
  for (size_t i = 0; i < span.size(); ++i) rows.row(i) = span[i].cwiseProduct(diag).transpose();
  Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  double smax = sv.size() ? sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-12 * std::max(1.0, smax)) ++rank;
  std::vector<Vec> out;
  for (int i = rank; i < d; ++i) out.push_back(svd.matrixV().col(i));
  return out;
}

double det_columns(const std::vector<Vec>& cols) {
  const int d = static_cast<int>(cols.size());
  Mat M(d, d);
  for (int j = 0; j < d; ++j) {
    if (cols[j].size() != d) throw Error(ErrorCode::input, "det_columns: non-square");
    M.col(j) = cols[j];
  }
  return M.partialPivLu().determinant();
}

std::string gram_condition_violation(Kind kind, const Mat& G, double det_tol) {
  const int n = static_cast<int>(G.rows());
  if (G.cols() != n) return "G not square";
  if (n < 2) return "n >= 2 required";
  if (!G.allFinite()) return "G has non-finite entries";
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-12) return "G not symmetric";
  for (int i = 0; i < n; ++i)
    if (std::abs(G(i, i) - 1.0) > 1e-12) return "G unit diagonal";
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    int sz = std::popcount(mask);
    if (sz < 2 || sz > n - 1) continue;
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) idx.push_back(i);
    Mat sub(sz, sz);
    for (int a = 0; a < sz; ++a)
      for (int b = 0; b < sz; ++b) sub(a, b) = G(idx[a], idx[b]);
    if (sub.determinant() <= 0.0) return "principal minors positive";
  }
  double det = G.determinant();
  double scale = std::pow(std::max(1.0, G.cwiseAbs().maxCoeff()), n);
  switch (kind) {
    case Kind::spherical:
      if (det <= det_tol * scale) return "det sign regime";
      break;
    case Kind::euclidean:
      if (std::abs(det) > det_tol * scale) return "det sign regime";
      break;
    case Kind::hyperbolic:
      if (det >= -det_tol * scale) return "det sign regime";
      break;
  }
  return {};
}

Frame realize_gram(const Space& space, const Mat& G, const Tolerances& tol) {
  const int n = space.n;
  if (G.rows() != n || G.cols() != n) throw Error(ErrorCode::input, "G must be n x n");
  std::string bad = gram_condition_violation(space.kind, G, 1e-10);
  if (!bad.empty()) throw Error(ErrorCode::invalid_data, bad);

  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  const Vec& w = es.eigenvalues();
  const Mat& Q = es.eigenvectors();
  const int d = space.dim();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  int offset = 0;
  Frame fr;
  switch (space.kind) {
    case Kind::spherical:
      offset = 1;
      fr.axis = Vec::Unit(d, 0);
      break;
    case Kind::hyperbolic:
      // eigenvalues ascend, so the single negative one is first and lands on axis 0
      offset = 0;
      fr.axis = Vec::Unit(d, n);
      break;
    case Kind::euclidean: {
      int drop = 0;
      for (int i = 1; i < n; ++i)
        if (std::abs(w[i]) < std::abs(w[drop])) drop = i;
      double wmax = w.cwiseAbs().maxCoeff();
      if (std::abs(w[drop]) > tol.euclid_rank * wmax)
        throw Error(ErrorCode::degenerate_data, "euclidean G is not of rank n-1");
      order.erase(order.begin() + drop);
      for (int i : order)
        if (w[i] <= tol.euclid_rank * wmax)
          throw Error(ErrorCode::degenerate_data, "euclidean G has rank < n-1");
      offset = 1;
      fr.axis = Vec::Unit(d, 0);
      break;
    }
  }
  for (int i = 0; i < n; ++i) {
    Vec v = Vec::Zero(d);
    for (size_t c = 0; c < order.size(); ++c) v[offset + c] = Q(i, order[c]) * std::sqrt(std::abs(w[order[c]]));
    fr.normals.push_back(v);
  }
  if (space.kind == Kind::hyperbolic && w[0] >= 0)
    throw Error(ErrorCode::invalid_data, "hyperbolic G needs one negative eigenvalue");
  return fr;
}

std::vector<Vec> dual_basis(const Space& space, const Frame& frame, const Mat& G) {
  if (space.kind == Kind::euclidean)
    throw Error(ErrorCode::unsupported, "dual basis is undefined for a rank-deficient euclidean G");
  const int n = static_cast<int>(frame.normals.size());
  Eigen::FullPivLU<Mat> lu(G);
  if (!lu.isInvertible() || std::abs(G.determinant()) < 1e-14)
    throw Error(ErrorCode::degenerate_data, "G numerically singular");
  Mat Gi = lu.inverse();
  std::vector<Vec> c;
  for (int i = 0; i < n; ++i) {
    Vec v = Vec::Zero(space.dim());
    for (int j = 0; j < n; ++j) v += Gi(i, j) * frame.normals[j];
    c.push_back(v);
  }
  return c;
}

}  // namespace flexcross
