#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "embed.hpp"

namespace eeclass {

// Five from-scratch binary classifiers on 2-D embedded points. Training is
// single-threaded given a seed; prediction runs parallel across points;
// fitted models are immutable and safe to share across threads.

enum class Method { LDA, QDA, KNN, SVM, RF };

const char* method_name(Method method);
Method parse_method(const std::string& text);

using Point2 = std::array<double, 2>;
using Mat2 = std::array<double, 4>;  // row-major 2x2

// Hyperparameters. Zero gamma selects the median-distance heuristic
// 1 / (2 * median^2) over standardized pairwise training distances.
struct TrainParams {
  int k = 5;                   // kNN neighbor count, must be odd
  double c = 1.0;              // SVM box constraint
  double gamma = 0.0;          // SVM kernel width, 0 = automatic
  int trees = 200;             // forest size
  int svm_max_passes = 10000;  // SMO sweep budget before reporting failure
};

// Per-axis affine standardization fitted on the training points. Axes with
// zero spread keep scale 1 so constant coordinates pass through unchanged.
struct AxisScaler {
  Point2 shift{0.0, 0.0};
  Point2 scale{1.0, 1.0};

  Point2 apply(const Point2& p) const {
    return {(p[0] - shift[0]) / scale[0], (p[1] - shift[1]) / scale[1]};
  }
};

struct LdaModel {
  std::array<Point2, 2> means;
  Mat2 pooled_inv;
  std::array<double, 2> log_prior;
};

struct QdaModel {
  std::array<Point2, 2> means;
  std::array<Mat2, 2> inv;
  std::array<double, 2> log_det;
  std::array<double, 2> log_prior;
};

struct KnnModel {
  AxisScaler scaler;
  std::vector<Point2> points;  // standardized training points
  std::vector<int> labels;
  int k = 5;
};

struct SvmModel {
  AxisScaler scaler;
  std::vector<Point2> support;  // standardized support vectors
  std::vector<double> coef;     // alpha_i * y_i per support vector
  std::vector<std::size_t> support_rows;  // original training row of each
  double bias = 0.0;
  double gamma = 1.0;
  double c = 1.0;
};

struct RfModel {
  struct Node {
    int axis = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int32_t left = -1;
    int32_t right = -1;
    int label = 0;  // majority label at a leaf
  };
  struct Tree {
    std::vector<Node> nodes;  // nodes[0] is the root
  };
  std::vector<Tree> trees;
  uint64_t seed = 0;
  double oob_error = 0.0;  // NaN when no point was ever out of bag
};

struct TrainedModel {
  Method method = Method::LDA;
  std::variant<LdaModel, QdaModel, KnnModel, SvmModel, RfModel> impl;
};

// Fits `method` to the embedded training sample. Both classes must be
// present; LDA/QDA additionally need three points per class. The seed only
// drives the forest's bootstrap and split streams.
TrainedModel train(const Embedded2D& sample, Method method,
                   const TrainParams& params = {}, uint64_t seed = 0);

// One label per point; deterministic (kNN distance ties go to the smaller
// training index, RF vote ties to label 0).
std::vector<int> predict(const TrainedModel& model,
                         const std::vector<Point2>& points);

// Gaussian log-discriminants per class; defined for lda and qda models.
std::array<double, 2> discriminant_scores(const TrainedModel& model,
                                          const Point2& x);

// Matching fraction of two equal-length label vectors.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

}  // namespace eeclass
