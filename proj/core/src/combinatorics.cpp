#include "flexcross/combinatorics.hpp"

#include <bit>
#include <map>

#include "flexcross/error.hpp"

namespace flexcross {

int FaceId::size() const { return std::popcount(I) + std::popcount(J); }

std::vector<int> FaceId::vertex_ids(int n) const {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (has(I, i)) out.push_back(i);
    else if (has(J, i)) out.push_back(n + i);
  }
  return out;
}

std::string FaceId::label(int n) const {
  std::string s = "[";
  bool first = true;
  for (int v : vertex_ids(n)) {
    if (!first) s += ' ';
    first = false;
    s += (v < n ? "a" : "b") + std::to_string((v % n) + 1);
  }
  return s + "]";
}

std::vector<FaceId> faces(int n, int dim) {
  if (n < 1 || n > kMaxN) throw Error(ErrorCode::input, "n out of supported range");
  if (dim < -1 || dim > n - 1) throw Error(ErrorCode::input, "face dimension out of range");
  std::vector<FaceId> out;
  const int k = dim + 1;
  const std::uint32_t full = full_mask(n);
  // choose the support S (|S| = k), then split it into I and J
  for (std::uint64_t S = 0; S <= full; ++S) {
    if (std::popcount(static_cast<std::uint32_t>(S)) != k) continue;
    std::uint32_t s = static_cast<std::uint32_t>(S);
    for (std::uint32_t I = s;; I = (I - 1) & s) {
      out.push_back({I, s & ~I});
      if (I == 0) break;
    }
  }
  return out;
}

std::vector<FaceId> facets(int n) {
  std::vector<FaceId> out;
  const std::uint32_t full = full_mask(n);
  for (std::uint64_t A = 0; A <= full; ++A) {
    std::uint32_t a = static_cast<std::uint32_t>(A);
    out.push_back({a, full & ~a});
  }
  return out;
}

std::vector<FaceId> ridges(int n) { return faces(n, n - 2); }

int missing_index(int n, const FaceId& ridge) {
  std::uint32_t rest = full_mask(n) & ~(ridge.I | ridge.J);
  if (std::popcount(rest) != 1) throw Error(ErrorCode::input, "not an (n-2)-face");
  return std::countr_zero(rest);
}

std::pair<int, int> missing_pair(int n, const FaceId& face) {
  std::uint32_t rest = full_mask(n) & ~(face.I | face.J);
  if (std::popcount(rest) != 2) throw Error(ErrorCode::input, "not an (n-3)-face");
  int k = std::countr_zero(rest);
  rest &= rest - 1;
  return {k, std::countr_zero(rest)};
}

int facet_orientation_sign(int n, std::uint32_t A, std::uint32_t B) {
  if ((A & B) != 0 || (A | B) != full_mask(n))
    throw Error(ErrorCode::input, "A and B must partition the index set");
  return std::popcount(B) % 2 == 0 ? 1 : -1;
}

int induced_orientation(int n, const FaceId& facet, const FaceId& ridge) {
  if (!facet.contains(ridge) || facet.size() != ridge.size() + 1)
    throw Error(ErrorCode::input, "ridge is not a codimension-1 face of facet");
  std::uint32_t removed = (facet.I | facet.J) & ~(ridge.I | ridge.J);
  int idx = std::countr_zero(removed);
  int pos = std::popcount((facet.I | facet.J) & ((1u << idx) - 1u));
  int sign = facet_orientation_sign(n, facet.I, facet.J);
  return (pos % 2 == 0) ? sign : -sign;
}

bool orientation_is_coherent(int n) {
  std::map<FaceId, std::vector<int>> induced;
  for (const FaceId& f : facets(n)) {
    for (int i = 0; i < n; ++i) {
      FaceId r{f.I & ~(1u << i), f.J & ~(1u << i)};
      induced[r].push_back(induced_orientation(n, f, r));
    }
  }
  if (static_cast<int>(induced.size()) != static_cast<int>(ridges(n).size())) return false;
  for (const auto& [r, signs] : induced) {
    if (signs.size() != 2 || signs[0] != -signs[1]) return false;
  }
  return true;
}

FaceId shared_face(const FaceId& f1, const FaceId& f2) { return {f1.I & f2.I, f1.J & f2.J}; }

std::vector<FaceId> facets_without(int n, int k) {
  std::vector<FaceId> out;
  for (const FaceId& r : ridges(n))
    if (missing_index(n, r) == k) out.push_back(r);
  return out;
}

}  // namespace flexcross
