#pragma once

#include <cstdint>

#include "fdata.hpp"
#include "scores.hpp"

namespace eeclass {

// Tunables for the parameterized depths; defaults follow common practice.
struct DepthParams {
  double hm_quantile = 0.15;  // bandwidth = this quantile of pairwise distances
  int rp_projections = 50;
  uint64_t rp_seed = 0;
};

// Integrated univariate-rank depth: for each grid point, the empirical CDF
// F(y) = #{k : x_k(t_j) <= y}/N gives Z = 1 - |1/2 - F|; the trapezoid
// integral of Z is normalized by the grid span, so values lie in [1/2, 1].
IndexVector fm_depth(const FunctionalDataset& eval, const FunctionalDataset& ref);

// Kernel mode depth: (1/N) sum_i exp(-(d(x, x_i)/h)^2 / 2) with d the
// weighted L2 distance and h the given quantile of the nonzero pairwise
// reference distances. Positive, not normalized to [0, 1].
IndexVector hmode_depth(const FunctionalDataset& eval, const FunctionalDataset& ref,
                        double quantile = 0.15);

// Random-projection depth: average over `projections` seeded unit-norm
// Gaussian directions of the univariate halfspace depth
// min(#below-or-equal, #above-or-equal)/N of the projected curve among the
// projected reference. Deterministic per seed.
IndexVector rp_depth(const FunctionalDataset& eval, const FunctionalDataset& ref,
                     int projections, uint64_t seed);

}  // namespace eeclass
