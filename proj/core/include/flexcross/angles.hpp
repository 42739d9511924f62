#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "flexcross/flexion.hpp"

namespace flexcross {

// Angle in radians, canonical representative in (-π, π].
double canonical_angle(double radians);
// Distance in R/2πZ.
double angle_distance(double x, double y);

// Product s_1 ... s_n: the orientation of the ambient space relative to the
// frame (m, c_1, ..., c_n).
int ambient_orientation_sign(const SimplestTypeData& data);

// Model point at the normalized barycenter of the given vertices.
Vec barycenter(const Space& space, const std::vector<Vec>& pts);

double measured_dihedral(const Configuration& config, const FaceId& ridge, bool swap_labels = false);

// X_k = {i | (i < k and s_i s'_i = 1) or (i > k and s_i s'_i = -1)} as a bitmask.
std::uint32_t X_set(const SimplestTypeData& data, int k);

double lambda_face(const SimplestTypeData& data, const FaceId& ridge);

double predicted_dihedral(const SimplestTypeData& data, const FaceId& ridge, const FlexParam& u);

// Worst deviation from the sign law ψ_{U,W∪l} = ∓ψ_{U∪l,W} (minus when l ∈ X_k)
// over all applicable ridge pairs, using measured angles.
double sign_law_residual(const Configuration& config);

struct LinkPolytope {
  Vec center;
  std::vector<int> vertex_ids;   // vertices of the star opposite to the face
  std::vector<Vec> directions;   // unit tangent directions, same order
  std::vector<FaceId> faces;     // link faces: F \ G for each facet F ⊃ G
};

LinkPolytope link_of_face(const Configuration& config, const FaceId& face);

enum class QuadrangleType { equal_opposite_first, equal_opposite_second, supplementary };
const char* to_string(QuadrangleType t);

struct QuadrangleClassification {
  QuadrangleType type = QuadrangleType::equal_opposite_first;
  double alpha = 0.0;  // side AB
  double beta = 0.0;   // side AD
  double bricard_constant = 0.0;
  double constant_spread = 0.0;  // relative spread over the samples
  double side_residual = 0.0;
};

// Link of an (n-3)-face G with missing indices k < l: A, B, C, D are the
// directions to a_l, a_k, b_l, b_k.
QuadrangleClassification classify_link_quadrangle(const FamilyPtr& family, const FaceId& face,
                                                  const std::vector<FlexParam>& samples);

}  // namespace flexcross
