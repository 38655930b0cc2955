#include "classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace eeclass {

namespace {

constexpr double kCovRidge = 1e-8;   // trace-scaled covariance ridge
constexpr double kSvmTol = 1e-3;     // KKT violation tolerance
constexpr double kAlphaEps = 1e-12;  // minimum dual step / support cutoff
constexpr int kMaxDepth = 12;

struct ClassCounts {
  std::size_t n[2] = {0, 0};
  std::size_t total() const { return n[0] + n[1]; }
};

ClassCounts check_sample(const Embedded2D& sample, Method method) {
  if (sample.points.size() != sample.labels.size()) {
    throw DataError("points and labels differ in length");
  }
  ClassCounts counts;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const int l = sample.labels[i];
    if (l != 0 && l != 1) throw DataError("labels must be 0 or 1");
    if (!std::isfinite(sample.points[i][0]) ||
        !std::isfinite(sample.points[i][1])) {
      throw DataError("training points contain a non-finite coordinate");
    }
    counts.n[static_cast<std::size_t>(l)] += 1;
  }
  if (counts.n[0] == 0 || counts.n[1] == 0) {
    throw DataError("training sample must contain both classes");
  }
  if ((method == Method::LDA || method == Method::QDA) &&
      (counts.n[0] < 3 || counts.n[1] < 3)) {
    throw DataError("discriminant analysis needs at least 3 points per class");
  }
  return counts;
}

Point2 mat2_apply(const Mat2& m, const Point2& v) {
  return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

void add_trace_ridge(Mat2& cov) {
  const double ridge = kCovRidge * (cov[0] + cov[3]) / 2.0;
  cov[0] += ridge;
  cov[3] += ridge;
}

// Adjugate inverse with an explicit residual guard: the fitted inverse must
// reproduce the identity to 1e-8, otherwise the covariance is reported as
// numerically singular.
Mat2 invert_covariance(const Mat2& m) {
  const double det = m[0] * m[3] - m[1] * m[2];
  const Mat2 inv{m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
  const double r[4] = {m[0] * inv[0] + m[1] * inv[2] - 1.0,
                       m[0] * inv[1] + m[1] * inv[3],
                       m[2] * inv[0] + m[3] * inv[2],
                       m[2] * inv[1] + m[3] * inv[3] - 1.0};
  const double resid = std::max({std::abs(r[0]), std::abs(r[1]),
                                 std::abs(r[2]), std::abs(r[3])});
  if (!(resid <= 1e-8)) {
    throw NumericError("covariance matrix is numerically singular");
  }
  return inv;
}

std::array<Point2, 2> class_means(const Embedded2D& s, const ClassCounts& counts) {
  std::array<Point2, 2> means{Point2{0.0, 0.0}, Point2{0.0, 0.0}};
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto l = static_cast<std::size_t>(s.labels[i]);
    means[l][0] += s.points[i][0];
    means[l][1] += s.points[i][1];
  }
  for (std::size_t c = 0; c < 2; ++c) {
    means[c][0] /= static_cast<double>(counts.n[c]);
    means[c][1] /= static_cast<double>(counts.n[c]);
  }
  return means;
}

Mat2 class_scatter(const Embedded2D& s, int cls, const Point2& mean) {
  Mat2 scatter{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    if (s.labels[i] != cls) continue;
    const double d0 = s.points[i][0] - mean[0];
    const double d1 = s.points[i][1] - mean[1];
    scatter[0] += d0 * d0;
    scatter[1] += d0 * d1;
    scatter[2] += d0 * d1;
    scatter[3] += d1 * d1;
  }
  return scatter;
}

std::array<double, 2> log_priors(const ClassCounts& counts) {
  const double n = static_cast<double>(counts.total());
  return {std::log(static_cast<double>(counts.n[0]) / n),
          std::log(static_cast<double>(counts.n[1]) / n)};
}

LdaModel fit_lda(const Embedded2D& s, const ClassCounts& counts) {
  LdaModel m;
  m.means = class_means(s, counts);
  const Mat2 s0 = class_scatter(s, 0, m.means[0]);
  const Mat2 s1 = class_scatter(s, 1, m.means[1]);
  Mat2 cov;
  const double denom = static_cast<double>(counts.total() - 2);
  for (std::size_t q = 0; q < 4; ++q) cov[q] = (s0[q] + s1[q]) / denom;
  add_trace_ridge(cov);
  m.pooled_inv = invert_covariance(cov);
  m.log_prior = log_priors(counts);
  return m;
}

QdaModel fit_qda(const Embedded2D& s, const ClassCounts& counts) {
  QdaModel m;
  m.means = class_means(s, counts);
  for (int c = 0; c < 2; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    Mat2 cov = class_scatter(s, c, m.means[cu]);
    const double denom = static_cast<double>(counts.n[cu] - 1);
    for (double& q : cov) q /= denom;
    add_trace_ridge(cov);
    const double det = cov[0] * cov[3] - cov[1] * cov[2];
    if (!(det > 0.0)) {
      throw NumericError("covariance matrix is numerically singular");
    }
    m.inv[cu] = invert_covariance(cov);
    m.log_det[cu] = std::log(det);
  }
  m.log_prior = log_priors(counts);
  return m;
}

AxisScaler fit_scaler(const std::vector<Point2>& pts) {
  AxisScaler s;
  std::vector<double> axis(pts.size());
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t i = 0; i < pts.size(); ++i) axis[i] = pts[i][a];
    s.shift[a] = mean_of(axis);
    const double sd = sample_sd(axis);
    s.scale[a] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

KnnModel fit_knn(const Embedded2D& s, const TrainParams& params) {
  if (params.k < 1 || params.k % 2 == 0) {
    throw DataError("k must be a positive odd number");
  }
  if (static_cast<std::size_t>(params.k) > s.points.size()) {
    throw DataError("k must not exceed the training sample size");
  }
  KnnModel m;
  m.k = params.k;
  m.scaler = fit_scaler(s.points);
  m.points.resize(s.points.size());
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    m.points[i] = m.scaler.apply(s.points[i]);
  }
  m.labels = s.labels;
  return m;
}

double squared_distance(const Point2& a, const Point2& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

SvmModel fit_svm(const Embedded2D& s, const TrainParams& params) {
  if (!(params.c > 0.0) || !std::isfinite(params.c)) {
    throw DataError("svm box constraint must be positive");
  }
  if (params.gamma < 0.0 || !std::isfinite(params.gamma)) {
    throw DataError("svm gamma must be nonnegative");
  }
  if (params.svm_max_passes < 1) {
    throw DataError("svm pass budget must be at least 1");
  }
  const std::size_t n = s.points.size();
  SvmModel m;
  m.c = params.c;
  m.scaler = fit_scaler(s.points);
  std::vector<Point2> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m.scaler.apply(s.points[i]);

  // Kernel matrix; the buffer first holds squared distances so the width
  // heuristic can read them, then is mapped to kernel values in place.
  std::vector<double> kmat(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) kmat[i * n + j] = squared_distance(x[i], x[j]);
  }
  double gamma = params.gamma;
  if (gamma == 0.0) {
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) dists.push_back(std::sqrt(kmat[i * n + j]));
    }
    const double median = quantile_of(std::move(dists), 0.5);
    if (!(median > 0.0)) {
      throw NumericError("pairwise training distances are all zero; kernel width undefined");
    }
    gamma = 1.0 / (2.0 * median * median);
  }
  m.gamma = gamma;
  for (double& v : kmat) v = std::exp(-gamma * v);

  std::vector<double> alpha(n, 0.0);
  std::vector<double> g(n, 0.0);  // sum_j alpha_j y_j K(j, i), bias excluded
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = s.labels[i] == 0 ? -1.0 : 1.0;
  double b = 0.0;
  const double c = params.c;

  const auto err = [&](std::size_t i) { return g[i] + b - y[i]; };
  const auto try_pair = [&](std::size_t i, std::size_t j) -> bool {
    const double ei = err(i);
    const double ej = err(j);
    const double ai = alpha[i];
    const double aj = alpha[j];
    double lo, hi;
    if (y[i] != y[j]) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(c, c + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - c);
      hi = std::min(c, ai + aj);
    }
    if (lo >= hi) return false;
    const double eta = 2.0 * kmat[i * n + j] - kmat[i * n + i] - kmat[j * n + j];
    if (eta >= 0.0) return false;
    // Snap results sitting within rounding distance of the box onto it:
    // cancellation noise like c + aj - ai - aj otherwise strands alphas a few
    // ulps off their bound, where they clog the working-pair selection with
    // steps too small to take.
    const double snap_width = c * kAlphaEps;
    const auto snap = [&](double a) {
      return a < snap_width ? 0.0 : (a > c - snap_width ? c : a);
    };
    const double ajn = snap(std::clamp(aj - y[j] * (ei - ej) / eta, lo, hi));
    if (std::abs(ajn - aj) < kAlphaEps) return false;
    const double ain = snap(ai + y[i] * y[j] * (aj - ajn));
    const double di = y[i] * (ain - ai);
    const double dj = y[j] * (ajn - aj);
    const double b1 = b - ei - di * kmat[i * n + i] - dj * kmat[i * n + j];
    const double b2 = b - ej - di * kmat[i * n + j] - dj * kmat[j * n + j];
    if (ain > 0.0 && ain < c) {
      b = b1;
    } else if (ajn > 0.0 && ajn < c) {
      b = b2;
    } else {
      b = (b1 + b2) / 2.0;
    }
    for (std::size_t t = 0; t < n; ++t) {
      g[t] += di * kmat[i * n + t] + dj * kmat[j * n + t];
    }
    alpha[i] = ain;
    alpha[j] = ajn;
    return true;
  };

  // Maximal-violating-pair passes. Optimality of the biased dual is measured
  // without the bias: v_i = y_i - g_i is the bias value that would make point
  // i sit exactly on its margin, points still able to raise their alpha bound
  // it from above and points able to lower it bound it from below, and once
  // the two bounds close to within 2*tol the midpoint bias puts every point
  // inside the KKT tolerance. Each successful update strictly increases the
  // dual objective, so the pair sequence cannot cycle.
  bool converged = false;
  for (int pass = 0; pass < params.svm_max_passes && !converged; ++pass) {
    std::size_t up = n, low = n;
    double v_up = 0.0, v_low = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = y[i] - g[i];
      const bool can_raise = y[i] > 0.0 ? alpha[i] < c : alpha[i] > 0.0;
      const bool can_lower = y[i] > 0.0 ? alpha[i] > 0.0 : alpha[i] < c;
      if (can_raise && (up == n || v > v_up)) {
        up = i;
        v_up = v;
      }
      if (can_lower && (low == n || v < v_low)) {
        low = i;
        v_low = v;
      }
    }
    if (up == n || low == n || v_up - v_low <= 2.0 * kSvmTol) {
      b = up == n || low == n ? b : (v_up + v_low) / 2.0;
      converged = true;
      break;
    }
    if (!try_pair(up, low)) {
      // The extreme pair is numerically stuck (duplicate points give a flat
      // kernel direction, or the feasible step is below the update floor);
      // walk the remaining violating pairs from most to least promising.
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b2) {
        return y[a] - g[a] > y[b2] - g[b2];
      });
      bool moved = false;
      for (std::size_t a = 0; a < n && !moved; ++a) {
        const std::size_t i = order[a];
        if (!(y[i] > 0.0 ? alpha[i] < c : alpha[i] > 0.0)) continue;
        for (std::size_t d = 0; d < n && !moved; ++d) {
          const std::size_t j = order[n - 1 - d];
          if (j == i || !(y[j] > 0.0 ? alpha[j] > 0.0 : alpha[j] < c)) continue;
          if (y[i] - g[i] <= y[j] - g[j] + 2.0 * kSvmTol) break;
          moved = try_pair(i, j);
        }
      }
      if (!moved) {
        // No feasible pair can move, yet the gap still exceeds the tolerance:
        // refuse to return a model that misses the advertised KKT bound.
        throw NumericError("svm optimization stalled short of its tolerance");
      }
    }
  }
  if (!converged) {
    throw NumericError("svm optimization did not converge within the pass budget");
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > kAlphaEps) {
      m.support.push_back(x[i]);
      m.coef.push_back(alpha[i] * y[i]);
      m.support_rows.push_back(i);
    }
  }
  m.bias = b;
  return m;
}

int tree_predict(const RfModel::Tree& tree, const Point2& x) {
  int32_t cur = 0;
  while (tree.nodes[static_cast<std::size_t>(cur)].axis >= 0) {
    const RfModel::Node& node = tree.nodes[static_cast<std::size_t>(cur)];
    cur = x[static_cast<std::size_t>(node.axis)] < node.threshold ? node.left
                                                                  : node.right;
  }
  return tree.nodes[static_cast<std::size_t>(cur)].label;
}

// Grows the subtree over idx[lo, hi) and returns its root node index.
int32_t grow_node(RfModel::Tree& tree, const Embedded2D& s,
                  std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi,
                  int depth, Rng& rng) {
  std::size_t c1 = 0;
  for (std::size_t p = lo; p < hi; ++p) c1 += static_cast<std::size_t>(s.labels[idx[p]]);
  const std::size_t size = hi - lo;
  const std::size_t c0 = size - c1;

  const auto make_leaf = [&]() -> int32_t {
    const auto me = static_cast<int32_t>(tree.nodes.size());
    tree.nodes.push_back({-1, 0.0, -1, -1, c1 > c0 ? 1 : 0});
    return me;
  };
  if (c0 == 0 || c1 == 0 || depth == kMaxDepth || size < 2) return make_leaf();

  // One random feature candidate per split; if it cannot separate the node
  // the node becomes a leaf.
  const auto axis = static_cast<std::size_t>(rng.below(2));
  std::vector<std::pair<double, int>> vals(size);
  for (std::size_t p = 0; p < size; ++p) {
    vals[p] = {s.points[idx[lo + p]][axis], s.labels[idx[lo + p]]};
  }
  std::sort(vals.begin(), vals.end());

  const auto gini = [](double a, double b) {
    const double total = a + b;
    return 1.0 - (a / total) * (a / total) - (b / total) * (b / total);
  };
  double best = gini(static_cast<double>(c0), static_cast<double>(c1)) - 1e-12;
  double threshold = 0.0;
  bool found = false;
  double l0 = 0.0;
  double l1 = 0.0;
  for (std::size_t p = 1; p < size; ++p) {
    if (vals[p - 1].second == 0) {
      l0 += 1.0;
    } else {
      l1 += 1.0;
    }
    if (!(vals[p - 1].first < vals[p].first)) continue;
    const double nl = static_cast<double>(p);
    const double nr = static_cast<double>(size - p);
    const double r0 = static_cast<double>(c0) - l0;
    const double r1 = static_cast<double>(c1) - l1;
    const double w = (nl * gini(l0, l1) + nr * gini(r0, r1)) /
                     static_cast<double>(size);
    if (w < best) {
      best = w;
      double mid = vals[p - 1].first + (vals[p].first - vals[p - 1].first) / 2.0;
      if (!(vals[p - 1].first < mid)) mid = vals[p].first;
      threshold = mid;
      found = true;
    }
  }
  if (!found) return make_leaf();

  const auto me = static_cast<int32_t>(tree.nodes.size());
  tree.nodes.push_back({static_cast<int>(axis), threshold, -1, -1, 0});
  const auto mid_it = std::partition(
      idx.begin() + static_cast<std::ptrdiff_t>(lo),
      idx.begin() + static_cast<std::ptrdiff_t>(hi),
      [&](std::size_t row) { return s.points[row][axis] < threshold; });
  const auto mid = static_cast<std::size_t>(mid_it - idx.begin());
  const int32_t left = grow_node(tree, s, idx, lo, mid, depth + 1, rng);
  const int32_t right = grow_node(tree, s, idx, mid, hi, depth + 1, rng);
  tree.nodes[static_cast<std::size_t>(me)].left = left;
  tree.nodes[static_cast<std::size_t>(me)].right = right;
  return me;
}

RfModel fit_rf(const Embedded2D& s, const TrainParams& params, uint64_t seed) {
  if (params.trees < 1) throw DataError("forest needs at least one tree");
  const std::size_t n = s.points.size();
  RfModel m;
  m.seed = seed;
  m.trees.resize(static_cast<std::size_t>(params.trees));
  std::vector<std::array<std::size_t, 2>> oob_votes(n, {0, 0});
  std::vector<std::size_t> boot(n);
  std::vector<char> inbag(n);
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    Rng rng(derive_seed(seed, t));
    std::fill(inbag.begin(), inbag.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      boot[i] = rng.below(n);
      inbag[boot[i]] = 1;
    }
    std::vector<std::size_t> idx = boot;
    grow_node(m.trees[t], s, idx, 0, n, 0, rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (!inbag[i]) {
        const int pred = tree_predict(m.trees[t], s.points[i]);
        oob_votes[i][static_cast<std::size_t>(pred)] += 1;
      }
    }
  }
  std::size_t counted = 0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (oob_votes[i][0] + oob_votes[i][1] == 0) continue;
    counted += 1;
    const int pred = oob_votes[i][1] > oob_votes[i][0] ? 1 : 0;
    wrong += pred != s.labels[i] ? 1 : 0;
  }
  m.oob_error = counted > 0
                    ? static_cast<double>(wrong) / static_cast<double>(counted)
                    : std::numeric_limits<double>::quiet_NaN();
  return m;
}

std::array<double, 2> lda_scores(const LdaModel& m, const Point2& x) {
  std::array<double, 2> scores;
  for (std::size_t c = 0; c < 2; ++c) {
    const Point2 w = mat2_apply(m.pooled_inv, m.means[c]);
    const double wm = w[0] * m.means[c][0] + w[1] * m.means[c][1];
    scores[c] = w[0] * x[0] + w[1] * x[1] - 0.5 * wm + m.log_prior[c];
  }
  return scores;
}

std::array<double, 2> qda_scores(const QdaModel& m, const Point2& x) {
  std::array<double, 2> scores;
  for (std::size_t c = 0; c < 2; ++c) {
    const Point2 d{x[0] - m.means[c][0], x[1] - m.means[c][1]};
    const Point2 id = mat2_apply(m.inv[c], d);
    const double q = d[0] * id[0] + d[1] * id[1];
    scores[c] = -0.5 * m.log_det[c] - 0.5 * q + m.log_prior[c];
  }
  return scores;
}

int predict_one(const LdaModel& m, const Point2& x) {
  const auto s = lda_scores(m, x);
  return s[1] > s[0] ? 1 : 0;
}

int predict_one(const QdaModel& m, const Point2& x) {
  const auto s = qda_scores(m, x);
  return s[1] > s[0] ? 1 : 0;
}

int predict_one(const KnnModel& m, const Point2& raw) {
  const Point2 x = m.scaler.apply(raw);
  std::vector<std::pair<double, std::size_t>> order(m.points.size());
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    order[i] = {squared_distance(m.points[i], x), i};
  }
  const auto k = static_cast<std::size_t>(m.k);
  std::nth_element(order.begin(),
                   order.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   order.end());
  int ones = 0;
  for (std::size_t t = 0; t < k; ++t) ones += m.labels[order[t].second];
  return 2 * ones > m.k ? 1 : 0;
}

int predict_one(const SvmModel& m, const Point2& raw) {
  const Point2 x = m.scaler.apply(raw);
  double f = m.bias;
  for (std::size_t v = 0; v < m.support.size(); ++v) {
    f += m.coef[v] * std::exp(-m.gamma * squared_distance(m.support[v], x));
  }
  return f > 0.0 ? 1 : 0;
}

int predict_one(const RfModel& m, const Point2& x) {
  std::size_t ones = 0;
  for (const auto& tree : m.trees) {
    ones += static_cast<std::size_t>(tree_predict(tree, x));
  }
  return 2 * ones > m.trees.size() ? 1 : 0;
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::LDA: return "lda";
    case Method::QDA: return "qda";
    case Method::KNN: return "knn";
    case Method::SVM: return "svm";
    case Method::RF: return "rf";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  if (text == "lda") return Method::LDA;
  if (text == "qda") return Method::QDA;
  if (text == "knn") return Method::KNN;
  if (text == "svm") return Method::SVM;
  if (text == "rf") return Method::RF;
  throw DataError("unknown method '" + text + "' (want lda|qda|knn|svm|rf)");
}

TrainedModel train(const Embedded2D& sample, Method method,
                   const TrainParams& params, uint64_t seed) {
  const ClassCounts counts = check_sample(sample, method);
  TrainedModel model;
  model.method = method;
  switch (method) {
    case Method::LDA: model.impl = fit_lda(sample, counts); break;
    case Method::QDA: model.impl = fit_qda(sample, counts); break;
    case Method::KNN: model.impl = fit_knn(sample, params); break;
    case Method::SVM: model.impl = fit_svm(sample, params); break;
    case Method::RF: model.impl = fit_rf(sample, params, seed); break;
  }
  return model;
}

std::vector<int> predict(const TrainedModel& model,
                         const std::vector<Point2>& points) {
  std::vector<int> out(points.size());
  parallel_for(points.size(), [&](std::size_t begin, std::size_t end) {
    std::visit(
        [&](const auto& m) {
          for (std::size_t i = begin; i < end; ++i) {
            out[i] = predict_one(m, points[i]);
          }
        },
        model.impl);
  });
  return out;
}

std::array<double, 2> discriminant_scores(const TrainedModel& model,
                                          const Point2& x) {
  if (const auto* lda = std::get_if<LdaModel>(&model.impl)) {
    return lda_scores(*lda, x);
  }
  if (const auto* qda = std::get_if<QdaModel>(&model.impl)) {
    return qda_scores(*qda, x);
  }
  throw DataError("discriminant scores are defined for lda and qda models only");
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) {
    throw DataError("label vectors differ in length");
  }
  if (predicted.empty()) throw DataError("label vectors are empty");
  std::size_t match = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    match += predicted[i] == truth[i] ? 1 : 0;
  }
  return static_cast<double>(match) / static_cast<double>(predicted.size());
}

}  // namespace eeclass
