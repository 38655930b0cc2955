#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eeclass.h"

namespace {

// Thrown after the error message has been printed; carries the exit code.
struct CliExit {
  int code;
};

int exit_code(eec_status status) {
  switch (status) {
    case EEC_OK:
      return 0;
    case EEC_ERROR_USAGE:
      return 1;
    case EEC_ERROR_DATA:
      return 2;
    case EEC_ERROR_NUMERIC:
      return 3;
    case EEC_ERROR_IO:
      return 2;
  }
  return 3;
}

void check(eec_status status) {
  if (status == EEC_OK) return;
  std::fprintf(stderr, "error: %s\n", eec_last_error());
  throw CliExit{exit_code(status)};
}

struct Dataset {
  eec_dataset* handle = nullptr;
  ~Dataset() { eec_dataset_free(handle); }
};

struct Embedding {
  eec_embedding* handle = nullptr;
  ~Embedding() { eec_embedding_free(handle); }
};

struct Model {
  eec_model* handle = nullptr;
  ~Model() { eec_model_free(handle); }
};

struct OwnedString {
  char* text = nullptr;
  ~OwnedString() { eec_string_free(text); }
};

std::string fmt(double value) {
  OwnedString s{eec_format_double(value)};
  return s.text == nullptr ? std::string("nan") : std::string(s.text);
}

void load(const std::string& path, Dataset& out) {
  check(eec_dataset_read_csv(path.c_str(), &out.handle));
}

void write_text(const std::string& path, const char* text) {
  if (path.empty()) {
    std::fputs(text, stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (out.good()) out << text;
  out.flush();
  if (!out.good()) {
    std::fprintf(stderr, "error: cannot write '%s'\n", path.c_str());
    throw CliExit{2};
  }
}

const std::vector<std::string> kScoreNames{"ei", "hi", "mei", "mhi",
                                           "fm", "hm", "rp"};
const std::vector<std::string> kKindNames{"ee-mei", "ee-mhi", "dd-fm",
                                          "dd-hm", "dd-rp"};
const std::vector<std::string> kMethodNames{"lda", "qda", "knn", "svm", "rf"};

// Validates one comma-separated flag value; prints a usage error and exits
// with code 1 on a bad entry.
void check_list(const std::string& value, const std::vector<std::string>& allowed,
                const char* flag) {
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::string item =
        value.substr(start, comma == std::string::npos ? comma : comma - start);
    bool ok = !item.empty();
    if (ok && !allowed.empty()) {
      ok = std::find(allowed.begin(), allowed.end(), item) != allowed.end();
    } else if (ok) {
      for (char ch : item) ok = ok && ch >= '0' && ch <= '9';
    }
    if (!ok) {
      std::fprintf(stderr, "error: invalid %s entry '%s'\n", flag, item.c_str());
      throw CliExit{1};
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Extremality-based classification of functional curves: generate "
      "benchmark data, score and embed curve samples, classify, "
      "cross-validate, and run the full experiment suite."};
  app.require_subcommand(1);
  app.fallthrough();  // lets --seed/--threads/--quiet appear after the subcommand

  unsigned long long seed = 42;
  int threads = 0;
  bool quiet = false;
  app.add_option("--seed", seed, "Master seed; all randomness derives from it")
      ->capture_default_str();
  app.add_option("--threads", threads,
                 "Worker threads; 0 uses all cores (results never depend on it)")
      ->capture_default_str();
  app.add_flag("--quiet", quiet, "Suppress informational messages on stderr");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic two-group dataset");
  int gen_experiment = 0;
  int gen_n = 200;
  int gen_m = 100;
  std::string gen_out;
  gen->add_option("--experiment", gen_experiment, "Benchmark preset 1-6")
      ->required()
      ->check(CLI::Range(1, 6));
  gen->add_option("--n-per-group", gen_n, "Curves per group")->capture_default_str();
  gen->add_option("--grid-points", gen_m, "Grid points per curve")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV file (default: stdout)");

  // indexes
  auto* idx = app.add_subcommand(
      "indexes", "Score every curve against its own sample (CSV id,label,value)");
  std::string idx_input;
  std::string idx_index;
  double idx_hm_quantile = 0.15;
  int idx_rp_projections = 50;
  std::string idx_out;
  idx->add_option("--input", idx_input, "Dataset CSV")->required();
  idx->add_option("--index", idx_index,
                  "Score: ei|hi|mei|mhi (extremality) or fm|hm|rp (depth)")
      ->required()
      ->check(CLI::IsMember(kScoreNames));
  idx->add_option("--hm-quantile", idx_hm_quantile,
                  "Bandwidth quantile of pairwise distances for hm")
      ->capture_default_str();
  idx->add_option("--rp-projections", idx_rp_projections,
                  "Projection count for rp")
      ->capture_default_str();
  idx->add_option("--out", idx_out, "Output CSV file (default: stdout)");

  // plot
  auto* plot = app.add_subcommand("plot", "Embed a dataset into the 2-D plot space");
  std::string plot_input;
  std::string plot_kind;
  std::string plot_points;
  std::string plot_svg;
  int plot_width = 640;
  int plot_height = 480;
  plot->add_option("--input", plot_input, "Dataset CSV")->required();
  plot->add_option("--kind", plot_kind, "Embedding: ee-mei|ee-mhi|dd-fm|dd-hm|dd-rp")
      ->required()
      ->check(CLI::IsMember(kKindNames));
  plot->add_option("--points", plot_points, "Output CSV of (label,u,v) points")
      ->required();
  plot->add_option("--svg", plot_svg, "Also write a scatter plot SVG here");
  plot->add_option("--width", plot_width, "SVG width in pixels")
      ->capture_default_str();
  plot->add_option("--height", plot_height, "SVG height in pixels")
      ->capture_default_str();

  // classify
  auto* cls = app.add_subcommand(
      "classify", "Train on one dataset, predict and score another");
  std::string cls_train;
  std::string cls_test;
  std::string cls_kind;
  std::string cls_method;
  int cls_k = 5;
  double cls_c = 1.0;
  double cls_gamma = 0.0;
  int cls_trees = 200;
  std::string cls_out;
  cls->add_option("--train", cls_train, "Training dataset CSV")->required();
  cls->add_option("--test", cls_test, "Evaluation dataset CSV")->required();
  cls->add_option("--kind", cls_kind, "Embedding: ee-mei|ee-mhi|dd-fm|dd-hm|dd-rp")
      ->required()
      ->check(CLI::IsMember(kKindNames));
  cls->add_option("--method", cls_method, "Classifier: lda|qda|knn|svm|rf")
      ->required()
      ->check(CLI::IsMember(kMethodNames));
  cls->add_option("--k", cls_k, "Neighbor count for knn (odd)")
      ->capture_default_str();
  cls->add_option("--c", cls_c, "Margin penalty for svm")->capture_default_str();
  cls->add_option("--gamma", cls_gamma,
                  "Kernel width for svm; 0 picks it from the data");
  cls->add_option("--trees", cls_trees, "Tree count for rf")->capture_default_str();
  cls->add_option("--out", cls_out,
                  "Predictions CSV file; with it, stdout carries the accuracy "
                  "line (default: predictions to stdout, accuracy to stderr)");

  // crossval
  auto* cv = app.add_subcommand("crossval",
                                "Stratified k-fold cross-validation summary");
  std::string cv_input;
  std::string cv_kind;
  std::string cv_method;
  int cv_folds = 10;
  int cv_k = 5;
  double cv_c = 1.0;
  double cv_gamma = 0.0;
  int cv_trees = 200;
  cv->add_option("--input", cv_input, "Dataset CSV")->required();
  cv->add_option("--kind", cv_kind, "Embedding: ee-mei|ee-mhi|dd-fm|dd-hm|dd-rp")
      ->required()
      ->check(CLI::IsMember(kKindNames));
  cv->add_option("--method", cv_method, "Classifier: lda|qda|knn|svm|rf")
      ->required()
      ->check(CLI::IsMember(kMethodNames));
  cv->add_option("--folds", cv_folds, "Requested fold count (clamped to the "
                                      "smaller class, with a warning)")
      ->capture_default_str();
  cv->add_option("--k", cv_k, "Neighbor count for knn (odd)")->capture_default_str();
  cv->add_option("--c", cv_c, "Margin penalty for svm")->capture_default_str();
  cv->add_option("--gamma", cv_gamma,
                 "Kernel width for svm; 0 picks it from the data");
  cv->add_option("--trees", cv_trees, "Tree count for rf")->capture_default_str();

  // suite
  auto* suite = app.add_subcommand(
      "suite", "Run the experiment grid and write a report directory "
               "(folds.csv, summary.csv, one scatter SVG per experiment and "
               "embedding)");
  std::string suite_experiments = "1,2,3,4,5,6";
  std::string suite_seeds = "1,2,3,4,5";
  std::string suite_kinds = "ee-mei,ee-mhi,dd-fm";
  std::string suite_methods = "lda,qda,knn,svm,rf";
  int suite_folds = 10;
  double suite_fraction = 0.8;
  std::string suite_out;
  suite->add_option("--experiments", suite_experiments, "Benchmark presets, comma-separated")
      ->capture_default_str();
  suite->add_option("--seeds", suite_seeds, "Seeds, comma-separated")
      ->capture_default_str();
  suite->add_option("--kinds", suite_kinds, "Embeddings, comma-separated")
      ->capture_default_str();
  suite->add_option("--methods", suite_methods, "Classifiers, comma-separated")
      ->capture_default_str();
  suite->add_option("--folds", suite_folds, "Cross-validation folds per cell")
      ->capture_default_str();
  suite->add_option("--train-fraction", suite_fraction,
                    "Training share of each stratified split")
      ->capture_default_str();
  suite->add_option("--out", suite_out, "Report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\nrun with --help for usage\n", e.what());
    return 1;
  }

  try {
    check(eec_set_threads(threads));

    if (app.got_subcommand(gen)) {
      Dataset data;
      check(eec_dataset_generate(gen_experiment, seed, gen_n, gen_m, &data.handle));
      if (gen_out.empty()) {
        OwnedString csv;
        check(eec_dataset_to_csv(data.handle, &csv.text));
        std::fputs(csv.text, stdout);
      } else {
        check(eec_dataset_write_csv(data.handle, gen_out.c_str()));
      }
      return 0;
    }

    if (app.got_subcommand(idx)) {
      Dataset data;
      load(idx_input, data);
      OwnedString csv;
      check(eec_scores_csv(data.handle, idx_index.c_str(), idx_hm_quantile,
                           idx_rp_projections, eec_derive_seed(seed, 1),
                           &csv.text));
      write_text(idx_out, csv.text);
      return 0;
    }

    if (app.got_subcommand(plot)) {
      Dataset data;
      load(plot_input, data);
      Embedding embedding;
      check(eec_embed(data.handle, data.handle, plot_kind.c_str(),
                      eec_derive_seed(seed, 1), &embedding.handle));
      OwnedString points;
      check(eec_embedding_points_csv(embedding.handle, &points.text));
      write_text(plot_points, points.text);
      if (!plot_svg.empty()) {
        OwnedString svg;
        check(eec_embedding_svg(embedding.handle, plot_width, plot_height,
                                &svg.text));
        write_text(plot_svg, svg.text);
      }
      return 0;
    }

    if (app.got_subcommand(cls)) {
      Dataset train;
      Dataset test;
      load(cls_train, train);
      load(cls_test, test);
      Model model;
      check(eec_model_train(train.handle, cls_kind.c_str(), cls_method.c_str(),
                            cls_k, cls_c, cls_gamma, cls_trees, seed,
                            &model.handle));
      OwnedString predictions;
      check(eec_model_predictions_csv(model.handle, test.handle,
                                      &predictions.text));
      double acc = 0.0;
      check(eec_model_accuracy(model.handle, test.handle, &acc));
      if (cls_out.empty()) {
        std::fputs(predictions.text, stdout);
        if (!quiet) std::fprintf(stderr, "accuracy %s\n", fmt(acc).c_str());
      } else {
        write_text(cls_out, predictions.text);
        std::fprintf(stdout, "accuracy %s\n", fmt(acc).c_str());
      }
      return 0;
    }

    if (app.got_subcommand(cv)) {
      Dataset data;
      load(cv_input, data);
      eec_cv_summary summary{};
      check(eec_crossval(data.handle, cv_kind.c_str(), cv_method.c_str(),
                         cv_folds, seed, cv_k, cv_c, cv_gamma, cv_trees,
                         &summary));
      if (summary.clamped != 0 && !quiet)
        std::fprintf(stderr, "warning: fold count clamped to %d of the requested %d\n",
                     summary.folds, summary.requested_folds);
      std::fprintf(stdout,
                   "kind=%s method=%s seed=%llu folds=%d mean=%s sd=%s min=%s "
                   "q1=%s median=%s q3=%s max=%s\n",
                   cv_kind.c_str(), cv_method.c_str(), seed, summary.folds,
                   fmt(summary.mean).c_str(), fmt(summary.sd).c_str(),
                   fmt(summary.min).c_str(), fmt(summary.q1).c_str(),
                   fmt(summary.median).c_str(), fmt(summary.q3).c_str(),
                   fmt(summary.max).c_str());
      return 0;
    }

    if (app.got_subcommand(suite)) {
      check_list(suite_experiments, {}, "--experiments");
      check_list(suite_seeds, {}, "--seeds");
      check_list(suite_kinds, kKindNames, "--kinds");
      check_list(suite_methods, kMethodNames, "--methods");
      OwnedString files;
      check(eec_suite_write_report(suite_experiments.c_str(), suite_kinds.c_str(),
                                   suite_methods.c_str(), suite_seeds.c_str(),
                                   suite_folds, suite_fraction,
                                   suite_out.c_str(), &files.text));
      if (!quiet) {
        int count = 0;
        for (const char* p = files.text; *p != '\0'; ++p) count += *p == '\n';
        std::fprintf(stderr, "wrote %d files to %s\n", count, suite_out.c_str());
      }
      return 0;
    }
  } catch (const CliExit& e) {
    return e.code;
  }
  return 0;
}
