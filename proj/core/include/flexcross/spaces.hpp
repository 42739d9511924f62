#pragma once

#include <Eigen/Dense>
#include <vector>

#include "flexcross/error.hpp"

namespace flexcross {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Kind { euclidean, spherical, hyperbolic };

const char* to_string(Kind kind);
Kind kind_from_string(const std::string& name);

struct Space {
  Kind kind = Kind::spherical;
  int n = 2;

  // Dimension of the coordinate vector space carrying the model.
  int dim() const { return kind == Kind::euclidean ? n : n + 1; }
  bool curved() const { return kind != Kind::euclidean; }
};

// Default numeric tolerances; every one of them can be overridden per call site
// through the struct, and from the CLI with --tol NAME=VALUE.
struct Tolerances {
  double clamp = 1e-12;
  double model = 1e-12;
  double frame = 1e-10;
  double euclid_rank = 1e-8;
  double timelike = 1e-12;
  double hyperbolic_dist = 1e-9;
};

double bilinear_form(const Space& space, const Vec& x, const Vec& y);
double quadratic_form(const Space& space, const Vec& x);

// Diagonal of the ambient form: all ones except -1 on axis 0 for hyperbolic.
Vec form_diagonal(const Space& space);

double geodesic_distance(const Space& space, const Vec& p, const Vec& q,
                         const Tolerances& tol = {});

// Spherical: sign * v / |v|.  Hyperbolic: the multiple of v on the upper sheet
// (sign is ignored).  Euclidean: v unchanged.
Vec project_to_model(const Space& space, const Vec& v, int sign = 1,
                     const Tolerances& tol = {});

bool is_model_point(const Space& space, const Vec& v, double tol = 1e-12);

// Tangent component of v at the model point x.
Vec tangent_at(const Space& space, const Vec& x, const Vec& v);

// Gram-Schmidt with respect to the ambient form; every input must be spacelike
// after projection (true for tangent vectors).  Dependent inputs are dropped
// when their residual norm falls below tol relative to the input.
std::vector<Vec> orthonormalize(const Space& space, const std::vector<Vec>& vecs,
                                double tol = 1e-12);

// Ambient-form unit vector(s) orthogonal to every vector in `span`.
// Returns a basis of the orthogonal complement.
std::vector<Vec> orthogonal_complement(const Space& space, const std::vector<Vec>& span);

struct Frame {
  std::vector<Vec> normals;  // n_1..n_n
  Vec axis;                  // m
  std::vector<Vec> duals;    // c_1..c_n (empty for euclidean)
};

// Checks the leading-minor and determinant regime of G for the given kind.
// Returns an empty string when valid, else a short description.
std::string gram_condition_violation(Kind kind, const Mat& G, double det_tol = 1e-10);

Frame realize_gram(const Space& space, const Mat& G, const Tolerances& tol = {});

std::vector<Vec> dual_basis(const Space& space, const Frame& frame, const Mat& G);

// Signed determinant of the square matrix whose columns are `cols`.
double det_columns(const std::vector<Vec>& cols);

}  // namespace flexcross
