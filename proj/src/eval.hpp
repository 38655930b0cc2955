#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "classify.hpp"
#include "embed.hpp"
#include "fdata.hpp"

namespace eeclass {

// Cross-validation harness and experiment suite runner. Folds are
// stratified; every fold re-embeds its validation curves against that
// fold's training references only, and an internal check refuses reference
// rows that overlap the evaluated rows. All results are deterministic
// functions of the seeds, independent of the thread count.

struct CVReport {
  Method method = Method::LDA;
  EmbeddingKind kind = EmbeddingKind::EE_MEI;
  std::vector<double> fold_accuracies;
  double mean = 0.0;
  double sd = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  uint64_t seed = 0;
  std::size_t folds = 0;           // effective fold count
  std::size_t requested_folds = 0;
  bool clamped = false;  // true when folds were reduced to the smaller class
};

struct SuiteCell {
  int experiment = 0;
  EmbeddingKind kind = EmbeddingKind::EE_MEI;
  Method method = Method::LDA;
  uint64_t seed = 0;
  CVReport cv;
  double test_accuracy = 0.0;
};

struct SuiteParams {
  std::vector<int> experiments;
  std::vector<EmbeddingKind> kinds;
  std::vector<Method> methods;
  std::vector<uint64_t> seeds;
  SplitSpec split;
  std::size_t folds = 10;
  TrainParams train_params;
};

struct SuiteReport {
  SuiteParams params;
  std::vector<SuiteCell> cells;  // sorted by experiment, kind, method, seed
};

// Stratified K-fold cross-validation of one embedding + classifier pair.
// The effective fold count is min(requested, smaller class size), flagged
// as clamped when reduced; each class must have at least 2 curves.
CVReport kfold_cv(const FunctionalDataset& dataset, EmbeddingKind kind,
                  Method method, std::size_t requested_folds, uint64_t seed,
                  const TrainParams& train_params = {});

// Full protocol over synthetic experiments: per (experiment, seed) generate
// the dataset, split train/test, cross-validate every kind x method cell on
// the training side, then fit on all training curves and score the held-out
// test curves. Cell seeds derive from the experiment id and the seed entry;
// the split spec contributes fraction and stratification but not its seed.
SuiteReport run_suite(const SuiteParams& params);

// Long-format fold table: `experiment,embedding,method,fold,accuracy` with
// fold numbered from 1, rows in cell order then fold order.
std::string suite_long_csv(const SuiteReport& report);

// One row per experiment x embedding x method, aggregated over seeds:
// `experiment,embedding,method,seeds,folds,cv_mean,cv_sd,cv_min,cv_median,
// cv_max,test_mean`.
std::string suite_summary_csv(const SuiteReport& report);

// Training embedding used for the suite's scatter plots: the experiment's
// dataset at data seed derive_seed(seed, experiment), embedded against
// itself, with projection directions from derive_seed(data_seed, 10).
Embedded2D suite_scatter(int experiment, EmbeddingKind kind, uint64_t seed);

// Writes the report directory: folds.csv (long format), summary.csv, and a
// 640x480 expE_KIND.svg scatter per experiment x kind at the first seed.
// Creates the directory if needed and returns the paths written, in order.
std::vector<std::string> write_suite_report(const SuiteReport& report,
                                            const std::string& dir);

}  // namespace eeclass
