#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "flexcross/angles.hpp"
#include "flexcross/flexion.hpp"
#include "flexcross/generate.hpp"

namespace flexcross {

double sphere_volume(int n);

enum class VolumeMethod { exact, quadrature, monte_carlo };
const char* to_string(VolumeMethod m);

struct VolumeEstimate {
  double value = 0.0;
  double abs_error = 0.0;
  VolumeMethod method = VolumeMethod::exact;
};

struct GeneralizedVolume {
  double value = 0.0;
  std::optional<double> modulus;  // σ_n for spherical values
  double abs_error = 0.0;
  std::string note;
};

// Distance between two volumes, circular when a modulus is present.
double volume_distance(double x, double y, std::optional<double> modulus);
// Canonical representative in [0, modulus).
double reduce_mod(double x, double modulus);

struct QuadratureOptions {
  double abs_tol = 0.0;  // 0: default per dimension (1e-10 for k = 3, 1e-8 for k >= 4)
  int max_depth = 14;
};

// Volume of the geodesic k-simplex with k+1 vertices.  Exact formulas up to
// k = 2 (and for all k in E^n); adaptive product Gauss-Legendre on collapsed
// coordinates for curved k >= 3.
VolumeEstimate simplex_volume(const Space& space, const std::vector<Vec>& vertices,
                              const QuadratureOptions& opt = {});

// Same, but degenerate simplices give zero instead of an error.
VolumeEstimate simplex_volume_or_zero(const Space& space, const std::vector<Vec>& vertices,
                                      const QuadratureOptions& opt = {});

// Faces are rigid during the flexion, so volumes are cached per face.
class FaceVolumeCache {
 public:
  explicit FaceVolumeCache(FamilyPtr family, QuadratureOptions opt = {});
  VolumeEstimate get(const FaceId& face);
  const FamilyPtr& family() const { return family_; }

 private:
  FamilyPtr family_;
  QuadratureOptions opt_;
  Configuration reference_;
  std::map<FaceId, VolumeEstimate> cache_;
  std::mutex mutex_;
};

VolumeEstimate face_volume(const Configuration& config, const FaceId& face, const QuadratureOptions& opt = {});

// Winding number of the oriented surface around x.  Spherical needs a base
// point (κ(base) := 0).  Throws indeterminate when no generic path is found.
int winding_number(const Configuration& config, const Vec& x, const std::optional<Vec>& base, Rng& rng);

struct DecompositionOptions {
  QuadratureOptions quad{};
  std::uint64_t seed = 0x5EED;
};

GeneralizedVolume generalized_volume(const Configuration& config, const DecompositionOptions& opt = {});

// V(P_0) ∈ {0, σ_n/2} from the sign pattern, plus the closed-form Schläfli increment.
GeneralizedVolume schlafli_volume(FaceVolumeCache& cache, const FlexParam& u);

GeneralizedVolume closed_form_volume(const SimplestTypeData& data, const FlexParam& u);

enum class YSet { plus, minus };
std::uint32_t y_set(const SimplestTypeData& data, YSet which);

struct RelationResidual {
  double residual = 0.0;
  double bound = 0.0;  // accumulated face-volume error
  double rhs = 0.0;
};

RelationResidual facet_relation_residual(FaceVolumeCache& cache, YSet which);
RelationResidual codim2_relation_residual(FaceVolumeCache& cache, int k);

// Replace a_i (id i) or b_i (id n+i) by its antipode.
SimplestTypeData antipode_flip(const SimplestTypeData& data, int vertex_id);

// Vertex ids (all of the form n+i, i.e. b-vertices) to flip so that
// s_1 s'_1 = 1 and s_2 s'_2 = -1.
std::vector<int> modified_bellows_witness(const SimplestTypeData& data);

}  // namespace flexcross
