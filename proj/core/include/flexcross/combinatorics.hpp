#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flexcross {

// Face Δ_{I,J} of the cross-polytope boundary: vertices a_i (i in I) and b_j
// (j in J), stored as bitmasks over the 0-based index set {0..n-1}.
struct FaceId {
  std::uint32_t I = 0;
  std::uint32_t J = 0;

  int size() const;  // number of vertices
  int dim() const { return size() - 1; }
  bool empty() const { return I == 0 && J == 0; }
  bool valid() const { return (I & J) == 0; }
  bool contains(const FaceId& other) const {
    return (other.I & ~I) == 0 && (other.J & ~J) == 0;
  }
  bool operator==(const FaceId& o) const { return I == o.I && J == o.J; }
  bool operator<(const FaceId& o) const { return I != o.I ? I < o.I : J < o.J; }

  // Vertex ids in index order: a_i -> i, b_i -> n + i.
  std::vector<int> vertex_ids(int n) const;
  std::string label(int n) const;
};

constexpr int kMaxN = 32;

inline std::uint32_t full_mask(int n) { return n >= 32 ? 0xffffffffu : ((1u << n) - 1u); }
inline bool has(std::uint32_t mask, int i) { return (mask >> i) & 1u; }

std::vector<FaceId> faces(int n, int dim);
std::vector<FaceId> facets(int n);
// (n-2)-faces; each misses exactly one index k.
std::vector<FaceId> ridges(int n);

// Unique index missing from an (n-2)-face.
int missing_index(int n, const FaceId& ridge);
// The two missing indices of an (n-3)-face, ascending.
std::pair<int, int> missing_pair(int n, const FaceId& face);

// Coherent orientation of K_n: (-1)^{|B|} with vertices listed in index order.
int facet_orientation_sign(int n, std::uint32_t A, std::uint32_t B);

// Induced orientation on `ridge` from the oriented `facet` (vertex order as in
// vertex_ids): sign * (-1)^{position of the removed vertex}.
int induced_orientation(int n, const FaceId& facet, const FaceId& ridge);

// Verifies that every (n-2)-face lies in exactly two facets inducing opposite
// orientations on it.
bool orientation_is_coherent(int n);

FaceId shared_face(const FaceId& f1, const FaceId& f2);

// Facets of the cross-polytope obtained by deleting vertices a_k, b_k.
std::vector<FaceId> facets_without(int n, int k);

}  // namespace flexcross
