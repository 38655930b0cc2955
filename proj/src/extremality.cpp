#include "extremality.hpp"

#include <cstddef>

#include "errors.hpp"
#include "parallel.hpp"

namespace eeclass {

namespace {

void check_curve(const std::vector<double>& x, const FunctionalDataset& ref) {
  if (x.size() != ref.point_count()) {
    throw DataError("curve length does not match the reference grid");
  }
  if (ref.curve_count() == 0) throw DataError("empty reference sample");
}

// Shared per-curve kernels; the batch path calls exactly these so batch and
// single-curve results are bit-identical.

template <bool kAbove>
double entire_share(const double* x, const FunctionalDataset& ref) {
  const std::size_t n = ref.curve_count();
  const std::size_t m = ref.point_count();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* r = ref.curve(i);
    bool holds = true;
    for (std::size_t j = 0; j < m; ++j) {
      if (kAbove ? r[j] < x[j] : r[j] > x[j]) {
        holds = false;
        break;
      }
    }
    count += holds;
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

template <bool kAbove>
double averaged_share(const double* x, const FunctionalDataset& ref) {
  const std::size_t n = ref.curve_count();
  const std::size_t m = ref.point_count();
  const double* w = ref.grid.weights().data();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* r = ref.curve(i);
    double measure = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      measure += w[j] * static_cast<double>(kAbove ? r[j] >= x[j] : r[j] <= x[j]);
    }
    total += measure;
  }
  return total / (static_cast<double>(n) * ref.grid.span());
}

double score_one(const double* x, const FunctionalDataset& ref, ScoreKind kind) {
  switch (kind) {
    case ScoreKind::EI: return entire_share<true>(x, ref);
    case ScoreKind::HI: return entire_share<false>(x, ref);
    case ScoreKind::MEI: return averaged_share<true>(x, ref);
    case ScoreKind::MHI: return averaged_share<false>(x, ref);
    default: throw DataError("index_vector handles ei|hi|mei|mhi only");
  }
}

}  // namespace

double epigraph_index(const std::vector<double>& x, const FunctionalDataset& ref) {
  check_curve(x, ref);
  return entire_share<true>(x.data(), ref);
}

double hypograph_index(const std::vector<double>& x, const FunctionalDataset& ref) {
  check_curve(x, ref);
  return entire_share<false>(x.data(), ref);
}

double modified_epigraph_index(const std::vector<double>& x,
                               const FunctionalDataset& ref) {
  check_curve(x, ref);
  return averaged_share<true>(x.data(), ref);
}

double modified_hypograph_index(const std::vector<double>& x,
                                const FunctionalDataset& ref) {
  check_curve(x, ref);
  return averaged_share<false>(x.data(), ref);
}

IndexVector index_vector(const FunctionalDataset& eval, const FunctionalDataset& ref,
                         ScoreKind kind) {
  if (!(eval.grid == ref.grid)) {
    throw DataError("grid mismatch between evaluation and reference samples");
  }
  if (ref.curve_count() == 0) throw DataError("empty reference sample");
  IndexVector out{kind, std::vector<double>(eval.curve_count()), ref.curve_count()};
  parallel_for(eval.curve_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out.values[i] = score_one(eval.curve(i), ref, kind);
    }
  });
  return out;
}

}  // namespace eeclass
