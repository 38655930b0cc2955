#include <doctest.h>

#include <cmath>
#include <vector>

#include "classify.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace eeclass;

namespace {

Embedded2D make_sample(std::vector<Point2> points, std::vector<int> labels) {
  Embedded2D e;
  e.points = std::move(points);
  e.labels = std::move(labels);
  return e;
}

// Two tight clusters around (0,0) and (1,1), ten points each.
Embedded2D separable_sample() {
  Rng rng(77);
  Embedded2D e;
  for (int i = 0; i < 20; ++i) {
    const double base = i < 10 ? 0.0 : 1.0;
    e.points.push_back({base + 0.01 * rng.normal(), base + 0.01 * rng.normal()});
    e.labels.push_back(i < 10 ? 0 : 1);
  }
  return e;
}

// Heavily overlapping clusters for optimizer stress tests.
Embedded2D overlapping_sample(uint64_t seed, int n) {
  Rng rng(seed);
  Embedded2D e;
  for (int i = 0; i < n; ++i) {
    const double base = static_cast<double>(i % 2);
    e.points.push_back({base + 1.2 * rng.normal(), base + 1.2 * rng.normal()});
    e.labels.push_back(i % 2);
  }
  return e;
}

// Class 0 has exactly diagonal scatter around (0,0); class 1 is the same
// cloud translated by (+2, 0), all on dyadic coordinates so means, scatter
// sums, and the translation are exact in floating point.
Embedded2D translated_pair_sample() {
  const std::vector<Point2> base{{-1, -1}, {-1, 1}, {1, -1},   {1, 1},
                                 {-0.5, 0}, {0.5, 0}, {0, -0.5}, {0, 0.5}};
  Embedded2D e;
  for (const Point2& p : base) {
    e.points.push_back(p);
    e.labels.push_back(0);
  }
  for (const Point2& p : base) {
    e.points.push_back({p[0] + 2.0, p[1]});
    e.labels.push_back(1);
  }
  return e;
}

const std::vector<Method> kAllMethods{Method::LDA, Method::QDA, Method::KNN,
                                      Method::SVM, Method::RF};

}  // namespace

TEST_CASE("every method separates two tight clusters perfectly") {
  const Embedded2D sample = separable_sample();
  for (Method method : kAllMethods) {
    INFO(method_name(method));
    const TrainedModel model = train(sample, method, {}, 11);
    const std::vector<int> pred = predict(model, sample.points);
    CHECK(accuracy(pred, sample.labels) == 1.0);
    CHECK(pred == sample.labels);
  }
}

TEST_CASE("linear discriminant of symmetric classes changes sign across the axis") {
  Rng rng(31);
  Embedded2D e;
  for (int i = 0; i < 100; ++i) {
    const double base = i < 50 ? -1.0 : 1.0;
    e.points.push_back({base + rng.normal(), rng.normal()});
    e.labels.push_back(i < 50 ? 0 : 1);
  }
  const TrainedModel model = train(e, Method::LDA);
  const auto left = discriminant_scores(model, {-2.0, 0.0});
  const auto right = discriminant_scores(model, {2.0, 0.0});
  CHECK(left[0] > left[1]);
  CHECK(right[1] > right[0]);
  CHECK(predict(model, {{-2.0, 0.0}, {2.0, 0.0}}) == std::vector<int>{0, 1});
}

TEST_CASE("quadratic discriminants match a dense linear-algebra refit") {
  Rng rng(123);
  std::vector<Point2> pts(40);
  std::vector<int> labels(40);
  for (int i = 0; i < 40; ++i) {
    const double spread = i % 2 == 0 ? 1.0 : 2.5;
    pts[static_cast<std::size_t>(i)] = {spread * rng.normal(),
                                        spread * rng.normal() + 0.5};
    labels[static_cast<std::size_t>(i)] = i % 2;
  }
  const TrainedModel model = train(make_sample(pts, labels), Method::QDA);

  std::vector<Point2> eval;
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      eval.push_back({static_cast<double>(a) * 0.7, static_cast<double>(b) * 0.9});
    }
  }
  const auto expected = oracle::qda_scores(pts, labels, eval);
  for (std::size_t i = 0; i < eval.size(); ++i) {
    const auto got = discriminant_scores(model, eval[i]);
    CHECK(std::abs(got[0] - expected[i][0]) <= 1e-9);
    CHECK(std::abs(got[1] - expected[i][1]) <= 1e-9);
  }
}

TEST_CASE("nearest neighbor with k=1 returns each training point's own label") {
  const Embedded2D sample = make_sample(
      {{0, 0}, {1, 0}, {0, 1}, {2, 2}, {3, 2}, {2, 3}}, {0, 0, 0, 1, 1, 1});
  TrainParams params;
  params.k = 1;
  const TrainedModel model = train(sample, Method::KNN, params);
  CHECK(predict(model, sample.points) == sample.labels);
}

TEST_CASE("forest training is reproducible and parallel-prediction safe") {
  const Embedded2D sample = overlapping_sample(40, 60);
  std::vector<Point2> grid;
  for (int a = 0; a <= 20; ++a) {
    for (int b = 0; b <= 20; ++b) {
      grid.push_back({-2.0 + 0.25 * a, -2.0 + 0.25 * b});
    }
  }
  const TrainedModel first = train(sample, Method::RF, {}, 9);
  const TrainedModel second = train(sample, Method::RF, {}, 9);
  const std::vector<int> base = predict(first, grid);
  CHECK(predict(second, grid) == base);
  set_threads(1);
  const std::vector<int> serial = predict(first, grid);
  set_threads(7);
  const std::vector<int> parallel = predict(first, grid);
  set_threads(0);
  CHECK(serial == base);
  CHECK(parallel == base);
}

TEST_CASE("accuracy is the matching fraction") {
  CHECK(accuracy({1, 0, 1}, {1, 0, 1}) == 1.0);
  CHECK(accuracy({1, 0, 1}, {0, 1, 0}) == 0.0);
  CHECK(accuracy({1, 0, 1, 1}, {1, 0, 1, 0}) == 0.75);
  CHECK_THROWS_AS(accuracy({1, 0}, {1}), DataError);
  CHECK_THROWS_AS(accuracy({}, {}), DataError);
}

TEST_CASE("linear discriminant boundary crosses any segment at most once") {
  const Embedded2D sample = overlapping_sample(50, 80);
  const TrainedModel model = train(sample, Method::LDA);
  std::vector<Point2> segment;
  for (int s = 0; s <= 200; ++s) {
    const double f = static_cast<double>(s) / 200.0;
    segment.push_back({-3.0 + 6.0 * f, -1.0 + 2.0 * f});
  }
  const std::vector<int> labels = predict(model, segment);
  int switches = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    switches += labels[i] != labels[i - 1] ? 1 : 0;
  }
  CHECK(switches <= 1);
}

TEST_CASE("equal per-class covariances collapse qda onto lda") {
  // The translated cloud gives both classes the bitwise-identical sample
  // covariance, which also equals the pooled one, so the quadratic terms
  // cancel and both rules decide by the same affine boundary at u = 1.
  const Embedded2D sample = translated_pair_sample();
  const TrainedModel lda = train(sample, Method::LDA);
  const TrainedModel qda = train(sample, Method::QDA);
  std::vector<Point2> grid;
  for (double u : {-2.0, -1.0, 0.0, 0.5, 0.75, 1.25, 1.5, 2.0, 3.0}) {
    for (double v : {-2.0, -1.0, 0.0, 1.0, 2.0}) grid.push_back({u, v});
  }
  const std::vector<int> from_lda = predict(lda, grid);
  CHECK(predict(qda, grid) == from_lda);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(from_lda[i] == (grid[i][0] < 1.0 ? 0 : 1));
  }
}

TEST_CASE("standardization absorbs per-axis affine rescaling exactly") {
  // Power-of-two scales and dyadic shifts keep every standardized value
  // bitwise identical, so predictions must match exactly.
  const Embedded2D sample = translated_pair_sample();
  Embedded2D scaled = sample;
  std::vector<Point2> grid;
  std::vector<Point2> scaled_grid;
  for (double u : {-2.0, -1.0, 0.0, 0.5, 0.75, 1.25, 1.5, 2.0, 3.0}) {
    for (double v : {-2.0, -1.0, 0.0, 1.0, 2.0}) grid.push_back({u, v});
  }
  const auto rescale = [](const Point2& p) -> Point2 {
    return {4.0 * p[0] + 2.0, 0.5 * p[1] - 1.0};
  };
  for (Point2& p : scaled.points) p = rescale(p);
  for (const Point2& p : grid) scaled_grid.push_back(rescale(p));

  for (Method method : {Method::KNN, Method::SVM}) {
    INFO(method_name(method));
    const TrainedModel plain = train(sample, method);
    const TrainedModel transformed = train(scaled, method);
    CHECK(predict(transformed, scaled_grid) == predict(plain, grid));
  }
}

TEST_CASE("svm training lands on the box-constrained optimality conditions") {
  const Embedded2D sample = overlapping_sample(5, 80);
  const TrainedModel model = train(sample, Method::SVM);
  const auto& svm = std::get<SvmModel>(model.impl);
  REQUIRE(!svm.support.empty());

  std::vector<double> alpha(sample.points.size(), 0.0);
  double coef_sum = 0.0;
  for (std::size_t v = 0; v < svm.support.size(); ++v) {
    const std::size_t row = svm.support_rows[v];
    const double y = sample.labels[row] == 0 ? -1.0 : 1.0;
    alpha[row] = svm.coef[v] * y;
    coef_sum += svm.coef[v];
  }
  CHECK(std::abs(coef_sum) <= 1e-8);

  const double tol = 1e-3 + 1e-6;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const Point2 x = svm.scaler.apply(sample.points[i]);
    double f = svm.bias;
    for (std::size_t v = 0; v < svm.support.size(); ++v) {
      const double dx = svm.support[v][0] - x[0];
      const double dy = svm.support[v][1] - x[1];
      f += svm.coef[v] * std::exp(-svm.gamma * (dx * dx + dy * dy));
    }
    const double y = sample.labels[i] == 0 ? -1.0 : 1.0;
    const double margin = y * f;
    CHECK(alpha[i] >= -1e-12);
    CHECK(alpha[i] <= svm.c + 1e-12);
    if (alpha[i] < svm.c) CHECK(margin >= 1.0 - tol);
    if (alpha[i] > 0.0) CHECK(margin <= 1.0 + tol);
  }
}

TEST_CASE("forest out-of-bag error stays low on separated clusters") {
  const TrainedModel model = train(separable_sample(), Method::RF, {}, 3);
  const auto& rf = std::get<RfModel>(model.impl);
  CHECK(rf.trees.size() == 200);
  CHECK(rf.oob_error <= 0.05);
}

TEST_CASE("optimizer reports failure when the pass budget is too small") {
  TrainParams params;
  params.svm_max_passes = 1;
  CHECK_THROWS_AS(train(overlapping_sample(5, 80), Method::SVM, params),
                  NumericError);
}

TEST_CASE("training rejects degenerate inputs") {
  const Embedded2D one_class =
      make_sample({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {0, 0, 0, 0});
  for (Method method : kAllMethods) {
    INFO(method_name(method));
    CHECK_THROWS_AS(train(one_class, method), DataError);
  }

  const Embedded2D tiny = make_sample({{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {0, 0, 1, 1});
  CHECK_THROWS_AS(train(tiny, Method::LDA), DataError);
  CHECK_THROWS_AS(train(tiny, Method::QDA), DataError);

  TrainParams bad;
  bad.k = 4;
  CHECK_THROWS_AS(train(tiny, Method::KNN, bad), DataError);
  bad.k = 7;
  CHECK_THROWS_AS(train(tiny, Method::KNN, bad), DataError);
  bad = {};
  bad.trees = 0;
  CHECK_THROWS_AS(train(tiny, Method::RF, bad), DataError);
  bad = {};
  bad.c = 0.0;
  CHECK_THROWS_AS(train(tiny, Method::SVM, bad), DataError);
  bad = {};
  bad.gamma = -1.0;
  CHECK_THROWS_AS(train(tiny, Method::SVM, bad), DataError);

  // Coincident points leave the kernel width heuristic undefined.
  const Embedded2D stacked = make_sample(
      {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}, {0, 1, 0, 1});
  CHECK_THROWS_AS(train(stacked, Method::SVM), NumericError);

  // Zero-spread classes make the covariance singular even after the ridge.
  const Embedded2D flat = make_sample(
      {{1, 1}, {1, 1}, {1, 1}, {2, 2}, {2, 2}, {2, 2}}, {0, 0, 0, 1, 1, 1});
  CHECK_THROWS_AS(train(flat, Method::QDA), NumericError);
  CHECK_THROWS_AS(train(flat, Method::LDA), NumericError);

  const TrainedModel knn = train(separable_sample(), Method::KNN);
  CHECK_THROWS_AS(discriminant_scores(knn, {0.0, 0.0}), DataError);

  CHECK_THROWS_AS(parse_method("forest"), DataError);
  CHECK(parse_method("rf") == Method::RF);
  CHECK(std::string(method_name(Method::QDA)) == "qda");
}
