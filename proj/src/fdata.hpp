#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace eeclass {

// Strictly increasing evaluation grid over a compact interval, with the
// trapezoid quadrature weights it induces: w_1 = (t_2-t_1)/2,
// w_j = (t_{j+1}-t_{j-1})/2, w_m = (t_m-t_{m-1})/2, so sum(w) = t_m - t_1.
class Grid {
 public:
  explicit Grid(std::vector<double> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  // Length of the interval, t_m - t_1; the normalizer for averaged indexes.
  double span() const { return span_; }

  bool operator==(const Grid& other) const { return points_ == other.points_; }

  static Grid uniform01(std::size_t m);

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  double span_ = 0.0;
};

// A sample of curves evaluated on a common grid, with binary group labels
// and optional per-curve identifiers. Immutable by convention once built.
struct FunctionalDataset {
  Grid grid;
  std::vector<double> values;  // row-major, curve_count x grid.size()
  std::vector<int> labels;     // one of {0, 1} per curve
  std::vector<std::string> ids;  // empty, or one unique id per curve
  std::array<std::string, 2> label_names{"A", "B"};

  std::size_t curve_count() const { return labels.size(); }
  std::size_t point_count() const { return grid.size(); }
  const double* curve(std::size_t i) const { return values.data() + i * grid.size(); }
  bool has_ids() const { return !ids.empty(); }
  std::array<std::size_t, 2> group_sizes() const;
  // Row indices carrying the given label, in dataset order.
  std::vector<uint32_t> group_rows(int label) const;

  // Throws DataError when any structural invariant is violated.
  void validate() const;

  FunctionalDataset subset(const std::vector<uint32_t>& rows) const;
};

struct SplitSpec {
  double train_fraction = 0.8;
  uint64_t seed = 42;
  bool stratified = true;
};

// CSV wire format: header `[id,]label,t_1,...,t_m`; one curve per row with
// its label token and m decimal values. The first distinct label token maps
// to group 0, the second to group 1; a third is an error. Values use '.'
// decimals, LF line endings, canonical shortest round-trip rendering.
FunctionalDataset load_csv(std::istream& in);
FunctionalDataset load_csv_file(const std::string& path);
void save_csv(const FunctionalDataset& d, std::ostream& out);
std::string to_csv(const FunctionalDataset& d);
void save_csv_file(const FunctionalDataset& d, const std::string& path);

// Deterministic (optionally stratified) partition into train and test.
// Train size is round(train_fraction * n); stratified splits distribute the
// remainder by largest fractional part, ties to group 0. Both sides stay
// non-empty (counts are clamped to [1, n-1] per stratum). When identifiers
// are present the selection is keyed on them, so reordering input rows does
// not change which curves land in train.
std::pair<FunctionalDataset, FunctionalDataset> split(const FunctionalDataset& d,
                                                      const SplitSpec& spec);

}  // namespace eeclass
