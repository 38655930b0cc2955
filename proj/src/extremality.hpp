#pragma once

#include <vector>

#include "fdata.hpp"
#include "scores.hpp"

namespace eeclass {

// Extremality of one curve x against a reference sample of n curves.
//
//   EI(x)  = (1/n) #{i : x_i(t_j) >= x(t_j) for all j}
//   HI(x)  = (1/n) #{i : x_i(t_j) <= x(t_j) for all j}
//   MEI(x) = (1/(n L)) sum_i sum_j w_j [x_i(t_j) >= x(t_j)]
//   MHI(x) = (1/(n L)) sum_i sum_j w_j [x_i(t_j) <= x(t_j)]
//
// with w the trapezoid weights and L the grid span. All comparisons are
// non-strict, so a grid-point tie counts toward both sides. High MEI means
// many curves sit above x (x is low); high MHI means x is high.
double epigraph_index(const std::vector<double>& x, const FunctionalDataset& ref);
double hypograph_index(const std::vector<double>& x, const FunctionalDataset& ref);
double modified_epigraph_index(const std::vector<double>& x, const FunctionalDataset& ref);
double modified_hypograph_index(const std::vector<double>& x, const FunctionalDataset& ref);

// Batch form over every curve of `eval`, order-preserving; parallel across
// curves with results identical to the single-curve calls. kind must be one
// of EI/HI/MEI/MHI.
IndexVector index_vector(const FunctionalDataset& eval, const FunctionalDataset& ref,
                         ScoreKind kind);

}  // namespace eeclass
