#pragma once

// Brute-force reference implementations used only by tests. Each is written
// straight from the defining formula with plain loops, independent of the
// library's optimized code paths, so agreement between the two is evidence
// of correctness rather than shared bugs.

#include <array>
#include <cstdint>
#include <vector>

#include "fdata.hpp"

namespace oracle {

using eeclass::FunctionalDataset;

// Extremality indexes of one curve against a reference sample.
double ei(const std::vector<double>& x, const FunctionalDataset& ref);
double hi(const std::vector<double>& x, const FunctionalDataset& ref);
double mei(const std::vector<double>& x, const FunctionalDataset& ref);
double mhi(const std::vector<double>& x, const FunctionalDataset& ref);

// Depths of one curve against a reference sample.
double fm(const std::vector<double>& x, const FunctionalDataset& ref);
double hm(const std::vector<double>& x, const FunctionalDataset& ref, double quantile);

// Random-projection depth for a whole evaluation set; reproduces the pinned
// direction stream (mt19937_64, 53-bit uniforms, Box-Muller with spare) from
// its documented definition.
std::vector<double> rp(const FunctionalDataset& eval, const FunctionalDataset& ref,
                       int projections, uint64_t seed);

// Gaussian log-discriminants (one per class) of quadratic discriminant
// analysis, fitted with dense linear algebra: per-class sample covariance
// with the trace-scaled ridge, inverse and determinant through a full-pivot
// LU factorization.
std::vector<std::array<double, 2>> qda_scores(
    const std::vector<std::array<double, 2>>& train_points,
    const std::vector<int>& train_labels,
    const std::vector<std::array<double, 2>>& eval_points);

// Extracts curve i of a dataset as a vector (test convenience).
std::vector<double> curve_of(const FunctionalDataset& d, std::size_t i);

// Random labeled dataset on a random strictly increasing grid; labels
// alternate so both groups are present whenever n >= 2.
FunctionalDataset random_dataset(uint64_t seed, std::size_t n, std::size_t m,
                                 bool with_ids = false);

}  // namespace oracle
