#pragma once

#include <string>
#include <vector>

#include "flexcross/flexion.hpp"
#include "flexcross/measure.hpp"

namespace flexcross {

// Homogeneous coordinates of the flat hyperplane X^{n-1} = m^⊥ (always R^n):
// spherical: linear coordinates; hyperbolic: Lorentzian coordinates, time first;
// euclidean: (x, 1).
struct FlatFrame {
  Space space;  // the ambient space of the flexing polytope
  Mat basis;    // dim x (n or n-1) basis of m^⊥, form-orthonormal
  Vec metric;   // diagonal of the induced form on homogeneous coordinates
};

FlatFrame flat_frame(const Space& space, const Vec& axis);
Vec flat_coords(const FlatFrame& frame, const Vec& v);

// Hyperplane of the flat space, as a covector on homogeneous coordinates.
// Normalized to unit euclidean norm with first nonzero coordinate positive.
struct ProjectiveHyperplane {
  Vec functional;
};

ProjectiveHyperplane make_projective(const Vec& functional);
// Sine of the principal angle between the representative lines.
double projective_distance(const Vec& x, const Vec& y);

// Facet functional through the given homogeneous points, scaled to unit
// metric norm (euclidean: unit linear part).
Vec facet_functional(const FlatFrame& frame, const std::vector<Vec>& pts);

// Bisector of the dihedral angle at G (dim n-3, missing k and l) between the
// two facets of P_(k) through G: interior when l ∈ X_k, exterior otherwise.
// `margin` receives the sine of the dihedral angle.
ProjectiveHyperplane bisector_hyperplane(const Configuration& flat, int k, const FaceId& G, double* margin = nullptr);

// Oriented sine ratio r(F1, H, F2) around the common (n-3)-face of the
// (n-2)-faces F1 and F2.
double ratio_r(const Configuration& flat, const FaceId& F1, const ProjectiveHyperplane& H, const FaceId& F2);

// Worst deviation of r(F1, B_G, F2) from λ_{F2}/λ_{F1} over all (n-3)-faces,
// with the reciprocal law at u = ∞.
double ratio_law_residual(const Configuration& flat);

struct Concurrency {
  Vec O;                       // unit representative
  double residual = 0.0;       // σ_min / σ_next
  double triple_residual = 0.0;  // worst Ceva triple rank defect
  double bisector_coincidence = 0.0;  // worst distance between B_{k,G} and B_{l,G}
  double dihedral_margin = 0.0;       // smallest |sin| of a dihedral angle at a G
};

// Throws concurrency_failure when residual > threshold.
Concurrency concurrency_point(const Configuration& flat, double threshold = 1e-6);

enum class FlatCase { concentric, common_hyperplane };
enum class PointType { interior, absolute, at_infinity, exterior };
enum class PerKKind { circumscribed, equidistant, parallel, equal_angle };
const char* to_string(FlatCase c);
const char* to_string(PointType t);
const char* to_string(PerKKind k);

struct PerK {
  int k = 0;
  PerKKind kind = PerKKind::circumscribed;
  double distance = 0.0;  // tangency/equidistant distance, or the common angle
  double spread = 0.0;    // max deviation of the per-facet values
  std::vector<FaceId> facets;
  std::vector<int> classes;  // 0/1, facet with J = ∅ anchored to 0
  bool parity_ok = false;    // classes == |J \ X_k| mod 2
};

struct FlatAnalysis {
  Vec O;
  double residual = 0.0;
  FlatCase flat_case = FlatCase::concentric;
  PointType point = PointType::interior;
  std::vector<PerK> per_k;
};

FlatAnalysis classify_flat(const Configuration& flat, const Concurrency& conc);

// Alternating sum over the facets of P_(k) by class and colour.
// Spherical requires P_(k) inside a closed hemisphere centred at ±O, else
// throws not_applicable.
RelationResidual circumscribed_alternating_sum(const Configuration& flat, const FlatAnalysis& analysis, int k,
                                               FaceVolumeCache& volumes);

}  // namespace flexcross
