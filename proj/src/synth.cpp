#include "synth.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "rng.hpp"

namespace eeclass {

namespace {

void check_cov(const CovarianceSpec& cov) {
  if (!(cov.alpha > 0.0) || !std::isfinite(cov.alpha)) {
    throw DataError("covariance amplitude must be positive");
  }
  if (!(cov.beta >= 0.0) || !std::isfinite(cov.beta)) {
    throw DataError("covariance dispersion must be non-negative");
  }
}

}  // namespace

std::vector<double> exp_cov_matrix(const Grid& grid, const CovarianceSpec& cov) {
  check_cov(cov);
  const std::size_t m = grid.size();
  const std::vector<double>& t = grid.points();
  std::vector<double> c(m * m);
  for (std::size_t j = 0; j < m; ++j) {
    c[j * m + j] = cov.alpha;
    for (std::size_t k = j + 1; k < m; ++k) {
      const double v = cov.alpha * std::exp(-cov.beta * (t[k] - t[j]));
      c[j * m + k] = v;
      c[k * m + j] = v;
    }
  }
  return c;
}

std::vector<double> cholesky_lower(const Grid& grid, const CovarianceSpec& cov) {
  const std::size_t m = grid.size();
  const std::vector<double> flat = exp_cov_matrix(grid, cov);
  const Eigen::Map<const Eigen::MatrixXd> c(flat.data(),
                                            static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(m));
  const double jitters[] = {0.0, 1e-10 * cov.alpha, 1e-8 * cov.alpha,
                            1e-6 * cov.alpha};
  for (double jitter : jitters) {
    Eigen::MatrixXd work = c;
    work.diagonal().array() += jitter;
    const Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      const Eigen::MatrixXd lower = llt.matrixL();
      std::vector<double> out(m * m, 0.0);
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t col = 0; col <= r; ++col) {
          out[r * m + col] = lower(static_cast<Eigen::Index>(r),
                                   static_cast<Eigen::Index>(col));
        }
      }
      return out;
    }
  }
  throw NumericError("covariance factorization failed at maximum jitter");
}

FunctionalDataset gauss_fdata(const std::function<double(double)>& centerline,
                              const CovarianceSpec& cov, std::size_t n,
                              const Grid& grid, uint64_t seed) {
  if (n < 1) throw DataError("need at least 1 curve");
  if (!centerline) throw DataError("missing centerline function");
  const std::size_t m = grid.size();
  const std::vector<double> lower = cholesky_lower(grid, cov);

  std::vector<double> center(m);
  for (std::size_t j = 0; j < m; ++j) {
    center[j] = centerline(grid.points()[j]);
    if (!std::isfinite(center[j])) {
      throw DataError("centerline evaluates to a non-finite value");
    }
  }

  FunctionalDataset d{grid, std::vector<double>(n * m), std::vector<int>(n, 0),
                      {}, {"A", "B"}};
  Rng rng(seed);
  std::vector<double> z(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) z[j] = rng.normal();
    double* row = d.values.data() + i * m;
    for (std::size_t r = 0; r < m; ++r) {
      const double* lrow = lower.data() + r * m;
      double acc = center[r];
      for (std::size_t col = 0; col <= r; ++col) acc += lrow[col] * z[col];
      row[r] = acc;
    }
  }
  return d;
}

ExperimentSpec experiment_preset(int id) {
  constexpr double pi = std::numbers::pi;
  ExperimentSpec spec;
  spec.id = id;
  spec.cov_a = {0.2, 0.3};
  spec.cov_b = {0.2, 0.3};
  switch (id) {
    case 1:
      spec.centerline_a = [](double t) { return std::sin(pi * t); };
      spec.centerline_b = [](double t) { return std::sin(pi * t); };
      break;
    case 2:
      spec.centerline_a = [](double t) { return std::sin(pi * t); };
      spec.centerline_b = [](double t) { return std::cos(pi * t); };
      break;
    case 3:
      spec.centerline_a = [](double t) { return std::sin(pi * t) - 2.0; };
      spec.centerline_b = [](double t) { return std::sin(pi * t); };
      break;
    case 4:
      spec.centerline_a = [](double t) { return std::sin(2.0 * pi * t); };
      spec.centerline_b = [](double t) { return std::cos(2.0 * pi * t); };
      spec.cov_b = {0.7, 0.3};
      break;
    case 5:
      spec.centerline_a = [](double t) { return std::sin(2.0 * pi * t); };
      spec.centerline_b = [](double t) { return std::cos(2.0 * pi * t); };
      spec.cov_b = {0.2, 0.9};
      break;
    case 6:
      spec.centerline_a = [](double t) { return t * t - 1.0; };
      spec.centerline_b = [](double t) { return t * t; };
      spec.cov_b = {0.2, 0.9};
      break;
    default:
      throw DataError("experiment id must be in 1..6, got " + std::to_string(id));
  }
  return spec;
}

FunctionalDataset generate_experiment(const ExperimentSpec& spec, uint64_t seed) {
  if (spec.n_per_group < 2) throw DataError("need at least 2 curves per group");
  if (spec.m < 2) throw DataError("need at least 2 grid points");
  const Grid grid = Grid::uniform01(spec.m);
  FunctionalDataset a =
      gauss_fdata(spec.centerline_a, spec.cov_a, spec.n_per_group, grid,
                  derive_seed(seed, 1));
  const FunctionalDataset b =
      gauss_fdata(spec.centerline_b, spec.cov_b, spec.n_per_group, grid,
                  derive_seed(seed, 2));

  a.values.insert(a.values.end(), b.values.begin(), b.values.end());
  a.labels.assign(spec.n_per_group, 0);
  a.labels.insert(a.labels.end(), spec.n_per_group, 1);
  a.ids.reserve(2 * spec.n_per_group);
  for (std::size_t i = 1; i <= spec.n_per_group; ++i) {
    a.ids.push_back("A" + std::to_string(i));
  }
  for (std::size_t i = 1; i <= spec.n_per_group; ++i) {
    a.ids.push_back("B" + std::to_string(i));
  }
  a.validate();
  return a;
}

}  // namespace eeclass
