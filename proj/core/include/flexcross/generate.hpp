#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flexcross/flexion.hpp"

namespace flexcross {

using Rng = std::mt19937_64;

// Derives an independent stream from a master seed and a label, so that every
// consumer of randomness is reproducible on its own.
std::uint64_t split_seed(std::uint64_t master, const std::string& label);

struct GeneratorOptions {
  double lambda_min = 0.3;
  double lambda_ratio_min = 1.25;  // λ_{i+1}/λ_i lower bound
  double lambda_ratio_max = 3.0;
  double minor_margin = 0.05;      // lower bound for principal minors
  double timelike_margin = 0.02;   // |<v,v>| / |v|² lower bound (hyperbolic)
  // Spherical only: required products s_i s'_i (empty: random).
  std::vector<int> products;
};

// Random well-conditioned data of the given kind, with sign rows chosen (spherical)
// or derived from the geometry (euclidean, hyperbolic).
SimplestTypeData random_data(Kind kind, int n, Rng& rng, const GeneratorOptions& opt = {});

// Identity-Gram data: G = I, the given λ, s_i = -1, s'_i = +1.
SimplestTypeData identity_data(int n, const std::vector<double>& lambda, int s = -1, int s_prime = 1);

// Sample of u-values: 0, ∞ and `count - 2` values spread over (-10, 10).
std::vector<FlexParam> sample_params(int count, Rng& rng, bool include_flat = true);

}  // namespace flexcross
