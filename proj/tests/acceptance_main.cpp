// End-to-end acceptance gate: one pass/fail line per shipped guarantee, all
// tolerances pinned here. Returns the number of failed criteria.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "config.hpp"
#include "depth.hpp"
#include "embed.hpp"
#include "eval.hpp"
#include "extremality.hpp"
#include "fdata.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "synth.hpp"

using namespace eeclass;

namespace {

int g_failures = 0;

void report(int number, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", number, pass ? "PASS" : "FAIL",
              detail.c_str());
  if (!pass) ++g_failures;
}

template <typename Fn>
void guard(int number, Fn&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(number, false, std::string("threw: ") + e.what());
  }
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::vector<double> curve_copy(const FunctionalDataset& d, std::size_t i) {
  return {d.curve(i), d.curve(i) + d.point_count()};
}

// Small random dataset with a rough grid and occasional deliberate value
// ties, so both the exact-tie and the generic code paths get exercised.
FunctionalDataset random_dataset(Rng& rng) {
  const std::size_t n = 2 + rng.below(9);
  const std::size_t m = 2 + rng.below(9);
  std::vector<double> points(m);
  for (std::size_t j = 0; j < m; ++j) {
    points[j] = (static_cast<double>(j) + 0.1 + 0.8 * rng.uniform01()) /
                static_cast<double>(m);
  }
  FunctionalDataset d{Grid(std::move(points)), {}, {}, {}, {"A", "B"}};
  const bool coarse = rng.below(3) == 0;
  d.values.resize(n * m);
  for (double& v : d.values) {
    v = 2.0 * rng.uniform01() - 1.0;
    if (coarse) v = std::round(v * 5.0) / 5.0;
  }
  d.labels.assign(n, 0);
  for (std::size_t i = 0; i < n / 2; ++i) d.labels[i] = 1;
  return d;
}

struct CellKey {
  int experiment;
  EmbeddingKind kind;
  Method method;
  bool operator<(const CellKey& o) const {
    return std::tie(experiment, kind, method) <
           std::tie(o.experiment, o.kind, o.method);
  }
};

// Mean CV accuracy per (experiment, kind, method), pooled over seeds/folds.
std::map<CellKey, double> pooled_means(const SuiteReport& r) {
  std::map<CellKey, std::pair<double, int>> agg;
  for (const auto& cell : r.cells) {
    auto& [sum, count] = agg[{cell.experiment, cell.kind, cell.method}];
    for (double a : cell.cv.fold_accuracies) {
      sum += a;
      ++count;
    }
  }
  std::map<CellKey, double> means;
  for (const auto& [key, sc] : agg) means[key] = sc.first / sc.second;
  return means;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

constexpr Method kAllMethods[] = {Method::LDA, Method::QDA, Method::KNN,
                                  Method::SVM, Method::RF};
constexpr EmbeddingKind kSuiteKinds[] = {
    EmbeddingKind::EE_MEI, EmbeddingKind::EE_MHI, EmbeddingKind::DD_FM};

}  // namespace

int main() {
  set_threads(0);
  const auto started = std::chrono::steady_clock::now();

  // 1. Optimized index and depth computations agree with brute-force oracles
  //    on 1000 random small datasets.
  guard(1, [] {
    Rng rng(derive_seed(2026, 1));
    double worst_exact = 0.0;
    double worst_close = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const FunctionalDataset d = random_dataset(rng);
      const uint64_t rp_seed = derive_seed(2026, 100 + trial);
      const IndexVector ei = index_vector(d, d, ScoreKind::EI);
      const IndexVector hi = index_vector(d, d, ScoreKind::HI);
      const IndexVector mei = index_vector(d, d, ScoreKind::MEI);
      const IndexVector mhi = index_vector(d, d, ScoreKind::MHI);
      const IndexVector fm = fm_depth(d, d);
      const IndexVector hm = hmode_depth(d, d, 0.15);
      const IndexVector rp = rp_depth(d, d, 7, rp_seed);
      const std::vector<double> rp_ref = oracle::rp(d, d, 7, rp_seed);
      for (std::size_t i = 0; i < d.curve_count(); ++i) {
        const std::vector<double> x = curve_copy(d, i);
        worst_exact = std::max(worst_exact,
                               std::abs(ei.values[i] - oracle::ei(x, d)));
        worst_exact = std::max(worst_exact,
                               std::abs(hi.values[i] - oracle::hi(x, d)));
        for (double diff : {mei.values[i] - oracle::mei(x, d),
                            mhi.values[i] - oracle::mhi(x, d),
                            fm.values[i] - oracle::fm(x, d),
                            hm.values[i] - oracle::hm(x, d, 0.15),
                            rp.values[i] - rp_ref[i]}) {
          worst_close = std::max(worst_close, std::abs(diff));
        }
      }
    }
    report(1, worst_exact == 0.0 && worst_close <= 1e-12,
           fmt("1000 random datasets; count-based indexes off by %.1e (want 0), "
               "weighted forms off by %.2e (tol 1e-12)",
               worst_exact, worst_close));
  });

  // 2. Identities on tie-free samples: MEI + MHI = 1 + 1/n for members,
  //    1/n membership floors, and invariance under the monotone map y^3 + y.
  guard(2, [] {
    double worst_sum = 0.0;
    double worst_floor = 1.0;
    bool monotone_ok = true;
    for (int s = 0; s < 100; ++s) {
      ExperimentSpec spec = experiment_preset(1 + s % 6);
      spec.n_per_group = 12;
      spec.m = 15;
      const FunctionalDataset d = generate_experiment(spec, derive_seed(77, s));
      const double n = static_cast<double>(d.curve_count());
      const IndexVector mei = index_vector(d, d, ScoreKind::MEI);
      const IndexVector mhi = index_vector(d, d, ScoreKind::MHI);
      const IndexVector ei = index_vector(d, d, ScoreKind::EI);
      const IndexVector hi = index_vector(d, d, ScoreKind::HI);
      for (std::size_t i = 0; i < d.curve_count(); ++i) {
        worst_sum = std::max(
            worst_sum,
            std::abs(mei.values[i] + mhi.values[i] - (1.0 + 1.0 / n)));
        for (double v : {mei.values[i], mhi.values[i], ei.values[i],
                         hi.values[i]}) {
          worst_floor = std::min(worst_floor, v - 1.0 / n);
        }
      }
      FunctionalDataset mapped = d;
      for (double& v : mapped.values) v = v * v * v + v;
      for (ScoreKind kind :
           {ScoreKind::EI, ScoreKind::HI, ScoreKind::MEI, ScoreKind::MHI}) {
        monotone_ok = monotone_ok && index_vector(mapped, mapped, kind).values ==
                                         index_vector(d, d, kind).values;
      }
    }
    report(2, worst_sum <= 1e-10 && worst_floor >= -1e-15 && monotone_ok,
           fmt("100 samples; |MEI+MHI-(1+1/n)| max %.2e (tol 1e-10), floor "
               "slack min %.2e (want >= 0), monotone-map invariance ",
               worst_sum, worst_floor) +
               (monotone_ok ? "held" : "broke"));
  });

  // 3. Claimed mirror law between the two index embeddings, plus matching
  //    kNN predictions.
  guard(3, [] {
    const FunctionalDataset d =
        generate_experiment(experiment_preset(2), derive_seed(5, 3));
    const auto sizes = d.group_sizes();
    const Embedded2D via_mei = embed(d, d, EmbeddingKind::EE_MEI);
    const Embedded2D via_mhi = embed(d, d, EmbeddingKind::EE_MHI);
    double worst_u = 0.0;
    double worst_v = 0.0;
    for (std::size_t i = 0; i < via_mei.points.size(); ++i) {
      const double mirror_u =
          1.0 + 1.0 / static_cast<double>(sizes[0]) - via_mei.points[i][0];
      const double mirror_v =
          1.0 + 1.0 / static_cast<double>(sizes[1]) - via_mei.points[i][1];
      worst_u = std::max(worst_u, std::abs(via_mhi.points[i][0] - mirror_u));
      worst_v = std::max(worst_v, std::abs(via_mhi.points[i][1] - mirror_v));
    }
    const uint64_t model_seed = derive_seed(5, 4);
    const std::vector<int> pred_mei =
        predict(train(via_mei, Method::KNN, {}, model_seed), via_mei.points);
    const std::vector<int> pred_mhi =
        predict(train(via_mhi, Method::KNN, {}, model_seed), via_mhi.points);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < pred_mei.size(); ++i) {
      agree += pred_mei[i] == pred_mhi[i] ? 1 : 0;
    }
    const bool coords_ok = worst_u <= 1e-10 && worst_v <= 1e-10;
    report(3, coords_ok && agree == pred_mei.size(),
           fmt("max |EE_MHI - (1+1/n - EE_MEI)|: u %.6f, v %.6f (tol 1e-10; "
               "a member curve is tied with itself in its own group only, so "
               "cross-group coordinates mirror about 1, leaving a 1/n = "
               "0.005 gap)",
               worst_u, worst_v) +
               fmt("; knn agreement %.0f/%.0f points",
                   static_cast<double>(agree),
                   static_cast<double>(pred_mei.size())));
  });

  // One full default-grid suite run feeds criteria 4-7; a second run under a
  // different thread budget feeds the determinism comparison in criterion 9.
  SuiteParams grid;
  grid.experiments = {1, 2, 3, 4, 5, 6};
  grid.kinds = {EmbeddingKind::EE_MEI, EmbeddingKind::EE_MHI,
                EmbeddingKind::DD_FM};
  grid.methods = {Method::LDA, Method::QDA, Method::KNN, Method::SVM,
                  Method::RF};
  grid.seeds = {1, 2, 3, 4, 5};
  std::map<CellKey, double> means;
  SuiteReport first_run;
  bool suite_ok = false;
  try {
    first_run = run_suite(grid);
    means = pooled_means(first_run);
    suite_ok = true;
  } catch (const std::exception& e) {
    const std::string why = std::string("default suite threw: ") + e.what();
    for (int k = 4; k <= 7; ++k) report(k, false, why);
  }

  // 4. Identically distributed groups classify at chance level.
  if (suite_ok) {
    double lo = 1.0, hi = 0.0;
    for (EmbeddingKind kind : kSuiteKinds) {
      for (Method method : kAllMethods) {
        const double mean = means.at({1, kind, method});
        lo = std::min(lo, mean);
        hi = std::max(hi, mean);
      }
    }
    report(4, lo >= 0.40 && hi <= 0.60,
           fmt("experiment 1 pooled CV accuracy spans [%.4f, %.4f] over all "
               "15 cells (band [0.40, 0.60])",
               lo, hi));
  }

  // 5. A constant vertical shift separates almost perfectly for every
  //    method, with the discriminant methods leading.
  if (suite_ok) {
    double worst_disc = 1.0, worst_other = 1.0;
    for (EmbeddingKind kind : kSuiteKinds) {
      for (Method method : kAllMethods) {
        const double mean = means.at({3, kind, method});
        if (method == Method::LDA || method == Method::QDA) {
          worst_disc = std::min(worst_disc, mean);
        } else {
          worst_other = std::min(worst_other, mean);
        }
      }
    }
    report(5, worst_disc >= 0.95 && worst_other >= 0.90,
           fmt("experiment 3 pooled CV accuracy: lda/qda min %.4f (floor "
               "0.95), knn/svm/rf min %.4f (floor 0.90)",
               worst_disc, worst_other));
  }

  // 6. Phase-shifted centerlines are picked up by the nonlinear methods.
  if (suite_ok) {
    double worst = 1.0;
    for (Method method :
         {Method::QDA, Method::KNN, Method::SVM, Method::RF}) {
      worst = std::min(worst, means.at({2, EmbeddingKind::EE_MEI, method}));
    }
    report(6, worst >= 0.80,
           fmt("experiment 2 pooled CV accuracy on the epigraph-index "
               "embedding: qda/knn/svm/rf min %.4f (floor 0.80)",
               worst));
  }

  // 7. Amplitude versus dispersion contamination changes little per method.
  if (suite_ok) {
    double worst = 0.0;
    for (Method method : kAllMethods) {
      const double gap = std::abs(means.at({4, EmbeddingKind::EE_MEI, method}) -
                                  means.at({5, EmbeddingKind::EE_MEI, method}));
      worst = std::max(worst, gap);
    }
    report(7, worst <= 0.10,
           fmt("experiments 4 vs 5 pooled CV accuracy gap per method: max "
               "%.4f (cap 0.10)",
               worst));
  }

  // 8. Generator moments: curve means meet a CLT bound at every grid point
  //    and the corner covariance lands within 5% relative error.
  guard(8, [] {
    const CovarianceSpec cov{0.2, 0.3};
    const std::size_t draws = 20000;
    const std::size_t m = 20;
    const Grid grid = Grid::uniform01(m);
    const auto centerline = [](double t) { return std::sin(3.14159265358979323846 * t); };
    const FunctionalDataset d =
        gauss_fdata(centerline, cov, draws, grid, derive_seed(2026, 8));
    const double bound =
        4.0 * std::sqrt(cov.alpha / static_cast<double>(draws));
    double worst_mean = 0.0;
    std::vector<double> mean(m, 0.0);
    for (std::size_t i = 0; i < draws; ++i) {
      for (std::size_t j = 0; j < m; ++j) mean[j] += d.curve(i)[j];
    }
    for (std::size_t j = 0; j < m; ++j) {
      mean[j] /= static_cast<double>(draws);
      worst_mean = std::max(worst_mean,
                            std::abs(mean[j] - centerline(grid.points()[j])));
    }
    double cov_corner = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      cov_corner += (d.curve(i)[0] - mean[0]) * (d.curve(i)[m - 1] - mean[m - 1]);
    }
    cov_corner /= static_cast<double>(draws - 1);
    const double expected = cov.alpha * std::exp(-cov.beta * (grid.points()[m - 1] - grid.points()[0]));
    const double rel = std::abs(cov_corner - expected) / expected;
    report(8, worst_mean <= bound && rel <= 0.05,
           fmt("20000 draws: max |mean - centerline| %.5f (CLT bound %.5f), "
               "corner covariance off by %.2f%% (cap 5%%)",
               worst_mean, bound, rel * 100.0));
  });

  // 9. The full suite report is byte-identical across runs and thread
  //    budgets, SVGs included.
  if (suite_ok) {
    guard(9, [&] {
      namespace fs = std::filesystem;
      const fs::path root = fs::temp_directory_path() /
                            ("eeclass_acceptance_" + std::to_string(::getpid()));
      const fs::path dir_a = root / "run_a";
      const fs::path dir_b = root / "run_b";
      const std::vector<std::string> files_a =
          write_suite_report(first_run, dir_a.string());
      set_threads(2);
      const SuiteReport second_run = run_suite(grid);
      set_threads(0);
      const std::vector<std::string> files_b =
          write_suite_report(second_run, dir_b.string());
      bool same = files_a.size() == files_b.size();
      std::size_t bytes = 0;
      for (std::size_t i = 0; same && i < files_a.size(); ++i) {
        const std::string a = read_file(files_a[i]);
        same = !a.empty() && a == read_file(files_b[i]);
        bytes += a.size();
      }
      report(9, same,
             fmt("two full-grid runs under different thread budgets: %.0f "
                 "files, %.0f bytes each, byte-identical: ",
                 static_cast<double>(files_a.size()),
                 static_cast<double>(bytes)) +
                 (same ? "yes" : "no"));
      fs::remove_all(root);
    });
  } else {
    report(9, false, "skipped: default suite run failed");
  }

  // 10. A user-supplied two-group CSV drives the whole pipeline end to end;
  //     the evaluation harness's leakage guard stays quiet throughout.
  guard(10, [] {
    const FunctionalDataset d = load_csv_file(FIXTURE_CSV);
    for (ScoreKind kind : {ScoreKind::EI, ScoreKind::HI, ScoreKind::MEI,
                           ScoreKind::MHI}) {
      (void)index_vector(d, d, kind);
    }
    (void)fm_depth(d, d);
    (void)hmode_depth(d, d, 0.15);
    (void)rp_depth(d, d, 50, derive_seed(42, 1));
    DepthParams dp;
    dp.rp_seed = derive_seed(42, 1);
    for (EmbeddingKind kind :
         {EmbeddingKind::EE_MEI, EmbeddingKind::EE_MHI, EmbeddingKind::DD_FM,
          EmbeddingKind::DD_HM, EmbeddingKind::DD_RP}) {
      (void)emit_svg(embed(d, d, kind, dp), 640, 480);
    }
    TrainParams knn_params;
    knn_params.k = 3;
    const CVReport cv =
        kfold_cv(d, EmbeddingKind::EE_MEI, Method::KNN, 5, 42, knn_params);
    const CVReport cv_dd = kfold_cv(d, EmbeddingKind::DD_FM, Method::LDA, 5, 43);
    SplitSpec split_spec;
    split_spec.train_fraction = 0.7;
    split_spec.seed = 9;
    const auto [train_part, test_part] = split(d, split_spec);
    const Embedded2D train_emb = embed(train_part, train_part,
                                       EmbeddingKind::EE_MEI, dp);
    const Embedded2D test_emb = embed(test_part, train_part,
                                      EmbeddingKind::EE_MEI, dp);
    const TrainedModel model = train(train_emb, Method::RF, {}, derive_seed(9, 2));
    const double holdout = accuracy(predict(model, test_emb.points),
                                    test_emb.labels);
    const bool sane = cv.mean >= 0.0 && cv.mean <= 1.0 && cv_dd.mean >= 0.0 &&
                      cv_dd.mean <= 1.0 && holdout >= 0.0 && holdout <= 1.0 &&
                      d.curve_count() == 20;
    report(10, sane,
           fmt("bundled 20-curve fixture: knn 5-fold CV %.3f, lda 5-fold CV "
               "%.3f, rf holdout %.3f; leakage guard never fired",
               cv.mean, cv_dd.mean, holdout));
  });

  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - started)
                          .count();
  std::printf("acceptance: %d/10 criteria passed in %.1fs\n", 10 - g_failures,
              secs);
  return g_failures;
}
