#include "depth.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace eeclass {

namespace {

void check_pair(const FunctionalDataset& eval, const FunctionalDataset& ref) {
  if (!(eval.grid == ref.grid)) {
    throw DataError("grid mismatch between evaluation and reference samples");
  }
  if (ref.curve_count() == 0) throw DataError("empty reference sample");
}

double l2_distance(const double* a, const double* b, const double* w, std::size_t m) {
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = a[j] - b[j];
    s += w[j] * d * d;
  }
  return std::sqrt(s);
}

}  // namespace

IndexVector fm_depth(const FunctionalDataset& eval, const FunctionalDataset& ref) {
  check_pair(eval, ref);
  const std::size_t n = ref.curve_count();
  const std::size_t m = ref.point_count();
  const double* w = ref.grid.weights().data();

  // Per-grid-point sorted reference values; the CDF becomes a binary search.
  std::vector<double> columns(m * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* r = ref.curve(i);
    for (std::size_t j = 0; j < m; ++j) columns[j * n + i] = r[j];
  }
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      std::sort(columns.begin() + static_cast<std::ptrdiff_t>(j * n),
                columns.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
    }
  });

  IndexVector out{ScoreKind::FM, std::vector<double>(eval.curve_count()), n};
  parallel_for(eval.curve_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const double* x = eval.curve(e);
      double integral = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const auto col = columns.begin() + static_cast<std::ptrdiff_t>(j * n);
        const auto at_or_below = std::upper_bound(col, col + static_cast<std::ptrdiff_t>(n), x[j]) - col;
        const double cdf = static_cast<double>(at_or_below) / static_cast<double>(n);
        integral += w[j] * (1.0 - std::abs(0.5 - cdf));
      }
      out.values[e] = integral / ref.grid.span();
    }
  });
  return out;
}

IndexVector hmode_depth(const FunctionalDataset& eval, const FunctionalDataset& ref,
                        double quantile) {
  check_pair(eval, ref);
  if (!(quantile > 0.0 && quantile < 1.0)) {
    throw DataError("bandwidth quantile must lie strictly between 0 and 1");
  }
  const std::size_t n = ref.curve_count();
  const std::size_t m = ref.point_count();
  const double* w = ref.grid.weights().data();
  if (n < 2) throw DataError("kernel mode depth needs at least 2 reference curves");

  std::vector<double> pairwise;
  pairwise.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double d = l2_distance(ref.curve(i), ref.curve(k), w, m);
      if (d > 0.0) pairwise.push_back(d);
    }
  }
  if (pairwise.empty()) {
    throw NumericError("all pairwise reference distances are zero; bandwidth undefined");
  }
  const double h = quantile_of(std::move(pairwise), quantile);

  IndexVector out{ScoreKind::HM, std::vector<double>(eval.curve_count()), n};
  parallel_for(eval.curve_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const double* x = eval.curve(e);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double u = l2_distance(x, ref.curve(i), w, m) / h;
        sum += std::exp(-u * u / 2.0);
      }
      out.values[e] = sum / static_cast<double>(n);
    }
  });
  return out;
}

IndexVector rp_depth(const FunctionalDataset& eval, const FunctionalDataset& ref,
                     int projections, uint64_t seed) {
  check_pair(eval, ref);
  if (projections < 1) throw DataError("projection count must be at least 1");
  const std::size_t n = ref.curve_count();
  const std::size_t m = ref.point_count();
  const std::size_t R = static_cast<std::size_t>(projections);
  const double* w = ref.grid.weights().data();

  // Directions come from one sequential stream so the set never depends on
  // scheduling; each is normalized to unit weighted-L2 length.
  std::vector<double> directions(R * m);
  Rng rng(seed);
  for (std::size_t r = 0; r < R; ++r) {
    double* dir = directions.data() + r * m;
    double norm2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) dir[j] = rng.normal();
    for (std::size_t j = 0; j < m; ++j) norm2 += w[j] * dir[j] * dir[j];
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) throw NumericError("degenerate projection direction");
    for (std::size_t j = 0; j < m; ++j) dir[j] /= norm;
  }

  // Sorted reference projections per direction.
  std::vector<double> projected(R * n);
  parallel_for(R, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const double* dir = directions.data() + r * m;
      double* p = projected.data() + r * n;
      for (std::size_t i = 0; i < n; ++i) {
        const double* c = ref.curve(i);
        double y = 0.0;
        for (std::size_t j = 0; j < m; ++j) y += w[j] * c[j] * dir[j];
        p[i] = y;
      }
      std::sort(p, p + n);
    }
  });

  IndexVector out{ScoreKind::RP, std::vector<double>(eval.curve_count()), n};
  parallel_for(eval.curve_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const double* x = eval.curve(e);
      double acc = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        const double* dir = directions.data() + r * m;
        double y = 0.0;
        for (std::size_t j = 0; j < m; ++j) y += w[j] * x[j] * dir[j];
        const double* p = projected.data() + r * n;
        const auto le = std::upper_bound(p, p + n, y) - p;
        const auto ge = static_cast<std::ptrdiff_t>(n) - (std::lower_bound(p, p + n, y) - p);
        acc += static_cast<double>(std::min(le, ge)) / static_cast<double>(n);
      }
      out.values[e] = acc / static_cast<double>(R);
    }
  });
  return out;
}

}  // namespace eeclass
