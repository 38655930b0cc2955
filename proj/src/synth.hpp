#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fdata.hpp"

namespace eeclass {

// Exponential covariance C(s, t) = alpha * exp(-beta * |s - t|): alpha is
// the amplitude (pointwise variance), beta the dispersion (decay of the
// correlation along the domain).
struct CovarianceSpec {
  double alpha = 0.2;
  double beta = 0.3;
};

// Two-group synthetic experiment: centerline and covariance per group.
struct ExperimentSpec {
  int id = 0;  // preset number, echoed in reports; 0 for ad-hoc specs
  std::function<double(double)> centerline_a;
  std::function<double(double)> centerline_b;
  CovarianceSpec cov_a;
  CovarianceSpec cov_b;
  std::size_t n_per_group = 200;
  std::size_t m = 100;
};

// Dense m*m covariance matrix of the grid under the covariance spec, row-major.
std::vector<double> exp_cov_matrix(const Grid& grid, const CovarianceSpec& cov);

// Lower-triangular Cholesky factor of the covariance, row-major. Rank
// deficiency (e.g. beta = 0) is handled by retrying with a diagonal jitter
// escalating through 1e-10, 1e-8, 1e-6 times alpha; past that the
// factorization is reported as failed.
std::vector<double> cholesky_lower(const Grid& grid, const CovarianceSpec& cov);

// n Gaussian sample paths: centerline(grid) + L * z, z i.i.d. standard
// normal from the seeded stream, drawn curve by curve. Labels are all 0 and
// no identifiers are attached; callers relabel as needed.
FunctionalDataset gauss_fdata(const std::function<double(double)>& centerline,
                              const CovarianceSpec& cov, std::size_t n,
                              const Grid& grid, uint64_t seed);

// The six benchmark presets on 100 equispaced points over [0, 1]:
//   1: sin(pi t)     vs sin(pi t)      cov (0.2, 0.3) / (0.2, 0.3)
//   2: sin(pi t)     vs cos(pi t)      cov (0.2, 0.3) / (0.2, 0.3)
//   3: sin(pi t) - 2 vs sin(pi t)      cov (0.2, 0.3) / (0.2, 0.3)
//   4: sin(2 pi t)   vs cos(2 pi t)    cov (0.2, 0.3) / (0.7, 0.3)
//   5: sin(2 pi t)   vs cos(2 pi t)    cov (0.2, 0.3) / (0.2, 0.9)
//   6: t^2 - 1       vs t^2            cov (0.2, 0.3) / (0.2, 0.9)
ExperimentSpec experiment_preset(int id);

// Labeled two-group dataset: n_per_group curves of group A first, then B.
// Groups draw from independent child streams derived as (seed, 1) and
// (seed, 2), and rows carry identifiers A1.., B1..
FunctionalDataset generate_experiment(const ExperimentSpec& spec, uint64_t seed);

}  // namespace eeclass
