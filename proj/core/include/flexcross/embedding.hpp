#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flexcross/flexion.hpp"
#include "flexcross/generate.hpp"

namespace flexcross {

enum class RelationTag { disjoint, shared_face, improper, inconclusive };
const char* to_string(RelationTag t);

struct IntersectionRelation {
  RelationTag tag = RelationTag::disjoint;
  std::optional<Vec> witness;  // a common point off the shared face (improper only)
  double margin = 0.0;         // LP objective that decided the tag
};

struct IntersectionTolerances {
  double zero = 1e-9;     // objective at or below: touching
  double improper = 1e-6; // off-shared mass above: improper
  double shrink = 1e-7;   // barycentric shrink used to separate touching from crossing
};

// Intersection of two geodesic simplices.  ids1/ids2 label the vertices; equal
// labels mark shared vertices (which must carry identical coordinates).
IntersectionRelation simplex_pair_relation(const Space& space, const std::vector<Vec>& s1,
                                           const std::vector<int>& ids1, const std::vector<Vec>& s2,
                                           const std::vector<int>& ids2, const IntersectionTolerances& tol = {});

enum class EmbedVerdict { embedded, self_intersecting, inconclusive };
const char* to_string(EmbedVerdict v);

struct EmbeddingResult {
  EmbedVerdict verdict = EmbedVerdict::embedded;
  std::optional<Vec> witness;
  std::optional<std::pair<FaceId, FaceId>> pair;  // offending or inconclusive facet pair
};

EmbeddingResult is_embedded(const Configuration& config, const IntersectionTolerances& tol = {});

// Degree of a flat spherical configuration onto the equator orthogonal to its axis.
int spherical_degree(const Configuration& config, Rng& rng);

enum class Hemisphere { strictly_positive, strictly_negative, closed_positive, closed_negative, equatorial, mixed };
const char* to_string(Hemisphere h);

Hemisphere hemisphere_position(const Configuration& config, const Vec& axis, double tol = 1e-10);

// Smallest spherical distance from b_1(u)..b_n(u) to the equator.
double rho(const FamilyPtr& family, const FlexParam& u);

struct RotatedFamily {
  FamilyPtr base;
  Vec k;     // n_1 + ... + n_n, unit
  Vec axis;  // m
};

// Requires the spherical sign pattern s_i = -1, s'_i = +1.
RotatedFamily make_rotated_family(const FamilyPtr& base);

double rotation_angle(const RotatedFamily& rf, const FlexParam& u);

// Rotation by α in the (k, m) plane, fixing the complement; k tilts towards -m.
Vec rotate(const RotatedFamily& rf, double alpha, const Vec& v);

Configuration rotated_configuration(const RotatedFamily& rf, const FlexParam& u);

struct CertificateItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct EmbeddingCertificate {
  std::vector<CertificateItem> items;
  double delta = 0.0;  // largest verified symmetric bracket (0: none)
  std::optional<Vec> witness_at_infinity;
  bool pass() const;
};

EmbeddingCertificate embedding_certificate(const RotatedFamily& rf, Rng& rng);

// dist(a_i, -n_i) and dist(b_i(0), n_i) against arcsin(1/sqrt n).
struct VertexBounds {
  std::vector<double> a_dist;
  std::vector<double> b_dist;
  double bound = 0.0;
  bool pass() const;
};
VertexBounds identity_family_bounds(const FamilyPtr& family);

}  // namespace flexcross
