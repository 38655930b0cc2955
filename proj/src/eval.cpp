#include "eval.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "errors.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "synth.hpp"
#include "textio.hpp"

namespace eeclass {

namespace {

struct FoldPlan {
  std::size_t folds = 0;
  bool clamped = false;
  std::vector<std::vector<uint32_t>> val_rows;
  std::vector<std::vector<uint32_t>> train_rows;
};

// Stratified fold assignment: each class is shuffled by its own derived
// stream and dealt round-robin, so every fold holds at least one curve of
// each class whenever the fold count is at most the smaller class size.
FoldPlan make_folds(const FunctionalDataset& d, std::size_t requested,
                    uint64_t seed) {
  if (requested < 2) throw DataError("fold count must be at least 2");
  const std::array<std::vector<uint32_t>, 2> groups{d.group_rows(0),
                                                    d.group_rows(1)};
  const std::size_t smaller = std::min(groups[0].size(), groups[1].size());
  if (smaller < 2) {
    throw DataError("each class needs at least 2 curves for cross-validation");
  }
  FoldPlan plan;
  plan.folds = std::min(requested, smaller);
  plan.clamped = plan.folds < requested;
  plan.val_rows.assign(plan.folds, {});
  for (std::size_t g = 0; g < 2; ++g) {
    std::vector<uint32_t> rows = groups[g];
    Rng rng(derive_seed(seed, g + 1));
    rng.shuffle(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      plan.val_rows[i % plan.folds].push_back(rows[i]);
    }
  }
  plan.train_rows.assign(plan.folds, {});
  for (std::size_t f = 0; f < plan.folds; ++f) {
    std::sort(plan.val_rows[f].begin(), plan.val_rows[f].end());
    for (std::size_t o = 0; o < plan.folds; ++o) {
      if (o == f) continue;
      plan.train_rows[f].insert(plan.train_rows[f].end(),
                                plan.val_rows[o].begin(),
                                plan.val_rows[o].end());
    }
    std::sort(plan.train_rows[f].begin(), plan.train_rows[f].end());
    std::vector<uint32_t> overlap;
    std::set_intersection(plan.train_rows[f].begin(), plan.train_rows[f].end(),
                          plan.val_rows[f].begin(), plan.val_rows[f].end(),
                          std::back_inserter(overlap));
    if (!overlap.empty()) {
      throw std::logic_error("leakage: fold rows overlap their training rows");
    }
  }
  return plan;
}

// Refuses evaluation curves whose identifiers appear among the references.
void check_disjoint_ids(const FunctionalDataset& reference,
                        const FunctionalDataset& evaluated) {
  if (reference.ids.empty() || evaluated.ids.empty()) return;
  const std::unordered_set<std::string> ref_ids(reference.ids.begin(),
                                                reference.ids.end());
  for (const std::string& id : evaluated.ids) {
    if (ref_ids.count(id) > 0) {
      throw std::logic_error("leakage: curve '" + id +
                             "' is both reference and evaluation");
    }
  }
}

struct FoldData {
  Embedded2D train_emb;
  Embedded2D val_emb;
};

std::vector<FoldData> embed_folds(const FunctionalDataset& d,
                                  const FoldPlan& plan, EmbeddingKind kind,
                                  const DepthParams& depth_params) {
  std::vector<FoldData> out(plan.folds);
  for (std::size_t f = 0; f < plan.folds; ++f) {
    const FunctionalDataset train_d = d.subset(plan.train_rows[f]);
    const FunctionalDataset val_d = d.subset(plan.val_rows[f]);
    check_disjoint_ids(train_d, val_d);
    out[f].train_emb = embed(train_d, train_d, kind, depth_params);
    out[f].val_emb = embed(val_d, train_d, kind, depth_params);
  }
  return out;
}

CVReport cv_from_folds(const std::vector<FoldData>& folds, EmbeddingKind kind,
                       Method method, const TrainParams& train_params,
                       uint64_t seed, std::size_t requested, bool clamped) {
  CVReport r;
  r.method = method;
  r.kind = kind;
  r.seed = seed;
  r.folds = folds.size();
  r.requested_folds = requested;
  r.clamped = clamped;
  r.fold_accuracies.resize(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const TrainedModel model =
        train(folds[f].train_emb, method, train_params, derive_seed(seed, f + 1));
    r.fold_accuracies[f] = accuracy(predict(model, folds[f].val_emb.points),
                                    folds[f].val_emb.labels);
  }
  r.mean = mean_of(r.fold_accuracies);
  r.sd = sample_sd(r.fold_accuracies);
  r.q1 = quantile_of(r.fold_accuracies, 0.25);
  r.median = quantile_of(r.fold_accuracies, 0.5);
  r.q3 = quantile_of(r.fold_accuracies, 0.75);
  r.min = *std::min_element(r.fold_accuracies.begin(), r.fold_accuracies.end());
  r.max = *std::max_element(r.fold_accuracies.begin(), r.fold_accuracies.end());
  return r;
}

DepthParams cv_depth_params(uint64_t cv_seed) {
  DepthParams dp;
  dp.rp_seed = derive_seed(cv_seed, 777);
  return dp;
}

bool cell_before(const SuiteCell& a, const SuiteCell& b) {
  const auto key = [](const SuiteCell& c) {
    return std::tuple(c.experiment, static_cast<int>(c.kind),
                      static_cast<int>(c.method), c.seed);
  };
  return key(a) < key(b);
}

bool same_summary_key(const SuiteCell& a, const SuiteCell& b) {
  return a.experiment == b.experiment && a.kind == b.kind && a.method == b.method;
}

}  // namespace

CVReport kfold_cv(const FunctionalDataset& dataset, EmbeddingKind kind,
                  Method method, std::size_t requested_folds, uint64_t seed,
                  const TrainParams& train_params) {
  const FoldPlan plan = make_folds(dataset, requested_folds, seed);
  const std::vector<FoldData> folds =
      embed_folds(dataset, plan, kind, cv_depth_params(seed));
  return cv_from_folds(folds, kind, method, train_params, seed, requested_folds,
                       plan.clamped);
}

SuiteReport run_suite(const SuiteParams& params) {
  if (params.experiments.empty() || params.kinds.empty() ||
      params.methods.empty() || params.seeds.empty()) {
    throw DataError("suite requires experiments, kinds, methods, and seeds");
  }
  SuiteReport report;
  report.params = params;
  for (const int e : params.experiments) {
    const ExperimentSpec spec = experiment_preset(e);
    for (const uint64_t s : params.seeds) {
      const uint64_t data_seed = derive_seed(s, static_cast<uint64_t>(e));
      const FunctionalDataset dataset = generate_experiment(spec, data_seed);
      SplitSpec split_spec = params.split;
      split_spec.seed = derive_seed(data_seed, 11);
      const auto [train_d, test_d] = split(dataset, split_spec);
      check_disjoint_ids(train_d, test_d);
      const uint64_t cv_seed = derive_seed(data_seed, 12);
      const FoldPlan plan = make_folds(train_d, params.folds, cv_seed);
      for (const EmbeddingKind kind : params.kinds) {
        const std::vector<FoldData> folds =
            embed_folds(train_d, plan, kind, cv_depth_params(cv_seed));
        DepthParams final_params;
        final_params.rp_seed = derive_seed(data_seed, 13);
        const Embedded2D full_train = embed(train_d, train_d, kind, final_params);
        const Embedded2D test_emb = embed(test_d, train_d, kind, final_params);
        for (const Method method : params.methods) {
          SuiteCell cell;
          cell.experiment = e;
          cell.kind = kind;
          cell.method = method;
          cell.seed = s;
          cell.cv = cv_from_folds(folds, kind, method, params.train_params,
                                  cv_seed, params.folds, plan.clamped);
          const TrainedModel model = train(full_train, method,
                                           params.train_params,
                                           derive_seed(data_seed, 14));
          cell.test_accuracy =
              accuracy(predict(model, test_emb.points), test_emb.labels);
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }
  std::sort(report.cells.begin(), report.cells.end(), cell_before);
  return report;
}

std::string suite_long_csv(const SuiteReport& report) {
  std::string out = "experiment,embedding,method,fold,accuracy\n";
  for (const SuiteCell& cell : report.cells) {
    for (std::size_t f = 0; f < cell.cv.fold_accuracies.size(); ++f) {
      out += std::to_string(cell.experiment);
      out += ',';
      out += embedding_kind_name(cell.kind);
      out += ',';
      out += method_name(cell.method);
      out += ',';
      out += std::to_string(f + 1);
      out += ',';
      append_double(out, cell.cv.fold_accuracies[f]);
      out += '\n';
    }
  }
  return out;
}

std::string suite_summary_csv(const SuiteReport& report) {
  std::string out =
      "experiment,embedding,method,seeds,folds,cv_mean,cv_sd,cv_min,"
      "cv_median,cv_max,test_mean\n";
  std::size_t i = 0;
  while (i < report.cells.size()) {
    std::size_t j = i;
    std::vector<double> accs;
    std::vector<double> tests;
    while (j < report.cells.size() &&
           same_summary_key(report.cells[j], report.cells[i])) {
      const CVReport& cv = report.cells[j].cv;
      accs.insert(accs.end(), cv.fold_accuracies.begin(),
                  cv.fold_accuracies.end());
      tests.push_back(report.cells[j].test_accuracy);
      ++j;
    }
    const SuiteCell& head = report.cells[i];
    out += std::to_string(head.experiment);
    out += ',';
    out += embedding_kind_name(head.kind);
    out += ',';
    out += method_name(head.method);
    out += ',';
    out += std::to_string(j - i);
    out += ',';
    out += std::to_string(head.cv.folds);
    out += ',';
    append_double(out, mean_of(accs));
    out += ',';
    append_double(out, sample_sd(accs));
    out += ',';
    append_double(out, *std::min_element(accs.begin(), accs.end()));
    out += ',';
    append_double(out, quantile_of(accs, 0.5));
    out += ',';
    append_double(out, *std::max_element(accs.begin(), accs.end()));
    out += ',';
    append_double(out, mean_of(tests));
    out += '\n';
    i = j;
  }
  return out;
}

Embedded2D suite_scatter(int experiment, EmbeddingKind kind, uint64_t seed) {
  const uint64_t data_seed = derive_seed(seed, static_cast<uint64_t>(experiment));
  const FunctionalDataset d =
      generate_experiment(experiment_preset(experiment), data_seed);
  DepthParams dp;
  dp.rp_seed = derive_seed(data_seed, 10);
  return embed(d, d, kind, dp);
}

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out.good()) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::vector<std::string> write_suite_report(const SuiteReport& report,
                                            const std::string& dir) {
  const std::filesystem::path base(dir);
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());

  std::vector<std::string> written;
  const auto emit = [&](const std::filesystem::path& name, const std::string& text) {
    const std::filesystem::path path = base / name;
    write_text_file(path, text);
    written.push_back(path.string());
  };
  emit("folds.csv", suite_long_csv(report));
  emit("summary.csv", suite_summary_csv(report));
  if (report.params.seeds.empty()) return written;
  const uint64_t first_seed = report.params.seeds.front();
  for (int experiment : report.params.experiments) {
    for (EmbeddingKind kind : report.params.kinds) {
      const Embedded2D embedded = suite_scatter(experiment, kind, first_seed);
      const std::string name = "exp" + std::to_string(experiment) + "_" +
                               embedding_kind_name(kind) + ".svg";
      emit(name, emit_svg(embedded, 640, 480));
    }
  }
  return written;
}

}  // namespace eeclass
