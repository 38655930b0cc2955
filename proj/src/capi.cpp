#include "eeclass.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "classify.hpp"
#include "config.hpp"
#include "depth.hpp"
#include "embed.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "extremality.hpp"
#include "fdata.hpp"
#include "rng.hpp"
#include "scores.hpp"
#include "synth.hpp"
#include "textio.hpp"

struct eec_dataset {
  eeclass::FunctionalDataset data;
};

struct eec_embedding {
  eeclass::Embedded2D embedded;
};

struct eec_model {
  eeclass::FunctionalDataset reference;
  eeclass::EmbeddingKind kind = eeclass::EmbeddingKind::EE_MEI;
  eeclass::DepthParams depth_params;
  eeclass::TrainedModel trained;
};

namespace {

thread_local std::string g_last_error;

eec_status usage_error(const std::string& what) {
  g_last_error = what;
  return EEC_ERROR_USAGE;
}

// Runs the body and maps thrown errors onto status codes.
template <typename Fn>
eec_status guarded(Fn&& body) {
  try {
    body();
    return EEC_OK;
  } catch (const eeclass::DataError& e) {
    g_last_error = e.what();
    return EEC_ERROR_DATA;
  } catch (const eeclass::NumericError& e) {
    g_last_error = e.what();
    return EEC_ERROR_NUMERIC;
  } catch (const eeclass::IoError& e) {
    g_last_error = e.what();
    return EEC_ERROR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EEC_ERROR_NUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EEC_ERROR_NUMERIC;
  }
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

eeclass::TrainParams make_train_params(int k, double c, double gamma, int trees) {
  eeclass::TrainParams params;
  if (k != 0) params.k = k;
  if (c != 0.0) params.c = c;
  params.gamma = gamma;  // 0 keeps the from-data default
  if (trees != 0) params.trees = trees;
  return params;
}

// Remaps labels of `data` onto the token order of `names`, so evaluation
// files may list the groups in either order.
eeclass::FunctionalDataset align_labels(const eeclass::FunctionalDataset& data,
                                        const std::array<std::string, 2>& names) {
  int remap[2] = {0, 1};
  bool changed = false;
  for (int g = 0; g < 2; ++g) {
    const std::string& token = data.label_names[g];
    if (token == names[0]) {
      remap[g] = 0;
    } else if (token == names[1]) {
      remap[g] = 1;
    } else if (data.group_sizes()[g] > 0) {
      throw eeclass::DataError("unknown label '" + token +
                               "'; the model was trained on '" + names[0] +
                               "' and '" + names[1] + "'");
    }
    changed = changed || remap[g] != g;
  }
  if (!changed) return data;
  eeclass::FunctionalDataset aligned = data;
  for (int& label : aligned.labels) label = remap[label];
  aligned.label_names = names;
  return aligned;
}

std::string row_id(const eeclass::FunctionalDataset& data, std::size_t i) {
  return data.has_ids() ? data.ids[i] : std::to_string(i + 1);
}

std::vector<unsigned long long> parse_u64_list(const char* text,
                                               const char* what) {
  std::vector<unsigned long long> out;
  std::string_view view(text);
  while (!view.empty()) {
    const std::size_t comma = view.find(',');
    const std::string_view item = view.substr(0, comma);
    unsigned long long value = 0;
    bool ok = !item.empty() && item.size() <= 19;
    for (char ch : item) {
      if (ch < '0' || ch > '9') {
        ok = false;
        break;
      }
      value = value * 10 + static_cast<unsigned long long>(ch - '0');
    }
    if (!ok)
      throw eeclass::DataError(std::string(what) + " list entry '" +
                               std::string(item) + "' is not a number");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    view.remove_prefix(comma + 1);
  }
  if (out.empty()) throw eeclass::DataError(std::string(what) + " list is empty");
  return out;
}

std::vector<std::string> parse_token_list(const char* text, const char* what) {
  std::vector<std::string> out;
  std::string_view view(text);
  while (!view.empty()) {
    const std::size_t comma = view.find(',');
    out.emplace_back(view.substr(0, comma));
    if (comma == std::string_view::npos) break;
    view.remove_prefix(comma + 1);
  }
  if (out.empty()) throw eeclass::DataError(std::string(what) + " list is empty");
  return out;
}

}  // namespace

extern "C" {

const char* eec_last_error(void) { return g_last_error.c_str(); }

void eec_string_free(char* text) { std::free(text); }

eec_status eec_set_threads(int n) {
  return guarded([&] { eeclass::set_threads(n); });
}

unsigned long long eec_derive_seed(unsigned long long seed,
                                   unsigned long long tag) {
  return eeclass::derive_seed(seed, tag);
}

char* eec_format_double(double value) {
  try {
    return copy_string(eeclass::format_double(value));
  } catch (...) {
    return nullptr;
  }
}

eec_status eec_dataset_read_csv(const char* path, eec_dataset** out) {
  if (path == nullptr || out == nullptr)
    return usage_error("eec_dataset_read_csv: null argument");
  return guarded([&] {
    *out = new eec_dataset{eeclass::load_csv_file(path)};
  });
}

eec_status eec_dataset_parse_csv(const char* text, eec_dataset** out) {
  if (text == nullptr || out == nullptr)
    return usage_error("eec_dataset_parse_csv: null argument");
  return guarded([&] {
    std::istringstream in{std::string(text)};
    *out = new eec_dataset{eeclass::load_csv(in)};
  });
}

eec_status eec_dataset_generate(int experiment, unsigned long long seed,
                                int n_per_group, int grid_points,
                                eec_dataset** out) {
  if (out == nullptr) return usage_error("eec_dataset_generate: null argument");
  return guarded([&] {
    eeclass::ExperimentSpec spec = eeclass::experiment_preset(experiment);
    if (n_per_group < 0 || grid_points < 0)
      throw eeclass::DataError("curve and grid counts must not be negative");
    if (n_per_group > 0) spec.n_per_group = static_cast<std::size_t>(n_per_group);
    if (grid_points > 0) spec.m = static_cast<std::size_t>(grid_points);
    *out = new eec_dataset{eeclass::generate_experiment(spec, seed)};
  });
}

eec_status eec_dataset_to_csv(const eec_dataset* data, char** out) {
  if (data == nullptr || out == nullptr)
    return usage_error("eec_dataset_to_csv: null argument");
  return guarded([&] { *out = copy_string(eeclass::to_csv(data->data)); });
}

eec_status eec_dataset_write_csv(const eec_dataset* data, const char* path) {
  if (data == nullptr || path == nullptr)
    return usage_error("eec_dataset_write_csv: null argument");
  return guarded([&] { eeclass::save_csv_file(data->data, path); });
}

eec_status eec_dataset_counts(const eec_dataset* data, int* out_curves,
                              int* out_grid_points) {
  if (data == nullptr) return usage_error("eec_dataset_counts: null argument");
  if (out_curves != nullptr)
    *out_curves = static_cast<int>(data->data.curve_count());
  if (out_grid_points != nullptr)
    *out_grid_points = static_cast<int>(data->data.point_count());
  return EEC_OK;
}

void eec_dataset_free(eec_dataset* data) { delete data; }

eec_status eec_scores_csv(const eec_dataset* data, const char* kind,
                          double hm_quantile, int rp_projections,
                          unsigned long long rp_seed, char** out) {
  if (data == nullptr || kind == nullptr || out == nullptr)
    return usage_error("eec_scores_csv: null argument");
  return guarded([&] {
    const eeclass::ScoreKind score_kind = eeclass::parse_score_kind(kind);
    const eeclass::FunctionalDataset& d = data->data;
    eeclass::IndexVector scores;
    switch (score_kind) {
      case eeclass::ScoreKind::FM:
        scores = eeclass::fm_depth(d, d);
        break;
      case eeclass::ScoreKind::HM:
        scores = eeclass::hmode_depth(d, d, hm_quantile > 0.0 ? hm_quantile : 0.15);
        break;
      case eeclass::ScoreKind::RP:
        scores = eeclass::rp_depth(d, d, rp_projections > 0 ? rp_projections : 50,
                                   rp_seed);
        break;
      default:
        scores = eeclass::index_vector(d, d, score_kind);
        break;
    }
    std::string csv = "id,label,value\n";
    for (std::size_t i = 0; i < scores.values.size(); ++i) {
      csv += row_id(d, i);
      csv += ',';
      csv += d.label_names[d.labels[i]];
      csv += ',';
      eeclass::append_double(csv, scores.values[i]);
      csv += '\n';
    }
    *out = copy_string(csv);
  });
}

eec_status eec_embed(const eec_dataset* eval, const eec_dataset* reference,
                     const char* kind, unsigned long long rp_seed,
                     eec_embedding** out) {
  if (eval == nullptr || reference == nullptr || kind == nullptr || out == nullptr)
    return usage_error("eec_embed: null argument");
  return guarded([&] {
    const eeclass::EmbeddingKind embedding_kind = eeclass::parse_embedding_kind(kind);
    eeclass::DepthParams params;
    params.rp_seed = rp_seed;
    *out = new eec_embedding{
        eeclass::embed(eval->data, reference->data, embedding_kind, params)};
  });
}

eec_status eec_embedding_points_csv(const eec_embedding* embedding, char** out) {
  if (embedding == nullptr || out == nullptr)
    return usage_error("eec_embedding_points_csv: null argument");
  return guarded([&] {
    *out = copy_string(eeclass::emit_points_csv(embedding->embedded));
  });
}

eec_status eec_embedding_svg(const eec_embedding* embedding, int width_px,
                             int height_px, char** out) {
  if (embedding == nullptr || out == nullptr)
    return usage_error("eec_embedding_svg: null argument");
  return guarded([&] {
    *out = copy_string(eeclass::emit_svg(embedding->embedded, width_px, height_px));
  });
}

void eec_embedding_free(eec_embedding* embedding) { delete embedding; }

eec_status eec_model_train(const eec_dataset* train, const char* kind,
                           const char* method, int k, double c, double gamma,
                           int trees, unsigned long long seed, eec_model** out) {
  if (train == nullptr || kind == nullptr || method == nullptr || out == nullptr)
    return usage_error("eec_model_train: null argument");
  return guarded([&] {
    const eeclass::EmbeddingKind embedding_kind = eeclass::parse_embedding_kind(kind);
    const eeclass::Method method_kind = eeclass::parse_method(method);
    eeclass::DepthParams depth_params;
    depth_params.rp_seed = eeclass::derive_seed(seed, 1);
    const eeclass::Embedded2D embedded =
        eeclass::embed(train->data, train->data, embedding_kind, depth_params);
    eeclass::TrainedModel trained =
        eeclass::train(embedded, method_kind, make_train_params(k, c, gamma, trees),
                       eeclass::derive_seed(seed, 2));
    *out = new eec_model{train->data, embedding_kind, depth_params,
                         std::move(trained)};
  });
}

eec_status eec_model_predictions_csv(const eec_model* model,
                                     const eec_dataset* data, char** out) {
  if (model == nullptr || data == nullptr || out == nullptr)
    return usage_error("eec_model_predictions_csv: null argument");
  return guarded([&] {
    const eeclass::FunctionalDataset aligned =
        align_labels(data->data, model->reference.label_names);
    const eeclass::Embedded2D embedded =
        eeclass::embed(aligned, model->reference, model->kind, model->depth_params);
    const std::vector<int> predicted =
        eeclass::predict(model->trained, embedded.points);
    std::string csv = "id,label,predicted\n";
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      csv += row_id(aligned, i);
      csv += ',';
      csv += aligned.label_names[aligned.labels[i]];
      csv += ',';
      csv += aligned.label_names[predicted[i]];
      csv += '\n';
    }
    *out = copy_string(csv);
  });
}

eec_status eec_model_accuracy(const eec_model* model, const eec_dataset* data,
                              double* out) {
  if (model == nullptr || data == nullptr || out == nullptr)
    return usage_error("eec_model_accuracy: null argument");
  return guarded([&] {
    const eeclass::FunctionalDataset aligned =
        align_labels(data->data, model->reference.label_names);
    const eeclass::Embedded2D embedded =
        eeclass::embed(aligned, model->reference, model->kind, model->depth_params);
    const std::vector<int> predicted =
        eeclass::predict(model->trained, embedded.points);
    *out = eeclass::accuracy(predicted, aligned.labels);
  });
}

void eec_model_free(eec_model* model) { delete model; }

eec_status eec_crossval(const eec_dataset* data, const char* kind,
                        const char* method, int folds,
                        unsigned long long seed, int k, double c, double gamma,
                        int trees, eec_cv_summary* out) {
  if (data == nullptr || kind == nullptr || method == nullptr || out == nullptr)
    return usage_error("eec_crossval: null argument");
  return guarded([&] {
    const eeclass::CVReport report = eeclass::kfold_cv(
        data->data, eeclass::parse_embedding_kind(kind),
        eeclass::parse_method(method),
        folds > 0 ? static_cast<std::size_t>(folds) : 10, seed,
        make_train_params(k, c, gamma, trees));
    out->mean = report.mean;
    out->sd = report.sd;
    out->q1 = report.q1;
    out->median = report.median;
    out->q3 = report.q3;
    out->min = report.min;
    out->max = report.max;
    out->folds = static_cast<int>(report.folds);
    out->requested_folds = static_cast<int>(report.requested_folds);
    out->clamped = report.clamped ? 1 : 0;
  });
}

eec_status eec_suite_write_report(const char* experiments, const char* kinds,
                                  const char* methods, const char* seeds,
                                  int folds, double train_fraction,
                                  const char* out_dir, char** out_files) {
  if (experiments == nullptr || kinds == nullptr || methods == nullptr ||
      seeds == nullptr || out_dir == nullptr)
    return usage_error("eec_suite_write_report: null argument");
  return guarded([&] {
    eeclass::SuiteParams params;
    for (unsigned long long value : parse_u64_list(experiments, "experiment")) {
      if (value > 1000)
        throw eeclass::DataError("experiment id " + std::to_string(value) +
                                 " is out of range");
      params.experiments.push_back(static_cast<int>(value));
    }
    for (const std::string& token : parse_token_list(kinds, "embedding"))
      params.kinds.push_back(eeclass::parse_embedding_kind(token));
    for (const std::string& token : parse_token_list(methods, "method"))
      params.methods.push_back(eeclass::parse_method(token));
    for (unsigned long long value : parse_u64_list(seeds, "seed"))
      params.seeds.push_back(static_cast<uint64_t>(value));
    if (folds > 0) params.folds = static_cast<std::size_t>(folds);
    if (train_fraction != 0.0) params.split.train_fraction = train_fraction;
    const eeclass::SuiteReport report = eeclass::run_suite(params);
    const std::vector<std::string> written =
        eeclass::write_suite_report(report, out_dir);
    if (out_files != nullptr) {
      std::string joined;
      for (const std::string& path : written) {
        joined += path;
        joined += '\n';
      }
      *out_files = copy_string(joined);
    }
  });
}

}  // extern "C"
