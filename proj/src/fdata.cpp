#include "fdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "errors.hpp"
#include "rng.hpp"
#include "textio.hpp"

namespace eeclass {

namespace {

bool is_clean_token(const std::string& s) {
  return !s.empty() && s.find_first_of(",\r\n") == std::string::npos;
}

std::string position(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col,
                  const char* what) {
  double value = 0.0;
  if (!parse_double(cell, value)) {
    throw DataError(position(row, col) + ": non-numeric " + what + " '" +
                    std::string(cell) + "'");
  }
  return value;
}

}  // namespace

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  const std::size_t m = points_.size();
  if (m < 2) throw DataError("grid must have at least 2 points");
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::isfinite(points_[j])) throw DataError("grid contains a non-finite value");
    if (j > 0 && !(points_[j] > points_[j - 1])) {
      throw DataError("grid not strictly increasing");
    }
  }
  weights_.resize(m);
  weights_[0] = (points_[1] - points_[0]) / 2.0;
  for (std::size_t j = 1; j + 1 < m; ++j) {
    weights_[j] = (points_[j + 1] - points_[j - 1]) / 2.0;
  }
  weights_[m - 1] = (points_[m - 1] - points_[m - 2]) / 2.0;
  span_ = points_[m - 1] - points_[0];
}

Grid Grid::uniform01(std::size_t m) {
  if (m < 2) throw DataError("grid must have at least 2 points");
  std::vector<double> pts(m);
  for (std::size_t j = 0; j < m; ++j) {
    pts[j] = static_cast<double>(j) / static_cast<double>(m - 1);
  }
  return Grid(std::move(pts));
}

std::array<std::size_t, 2> FunctionalDataset::group_sizes() const {
  std::array<std::size_t, 2> sizes{0, 0};
  for (int label : labels) sizes[static_cast<std::size_t>(label)]++;
  return sizes;
}

std::vector<uint32_t> FunctionalDataset::group_rows(int label) const {
  std::vector<uint32_t> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) rows.push_back(static_cast<uint32_t>(i));
  }
  return rows;
}

void FunctionalDataset::validate() const {
  const std::size_t n = labels.size();
  const std::size_t m = grid.size();
  if (n == 0) throw DataError("dataset has no curves");
  if (values.size() != n * m) {
    throw DataError("value matrix size does not match curve and grid counts");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw DataError("label out of range at curve " + std::to_string(i));
    }
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw DataError("non-finite value at curve " + std::to_string(k / m) +
                      ", point " + std::to_string(k % m));
    }
  }
  if (!ids.empty()) {
    if (ids.size() != n) throw DataError("identifier count does not match curve count");
    std::unordered_set<std::string> seen;
    for (const std::string& id : ids) {
      if (!is_clean_token(id)) {
        throw DataError("identifier '" + id + "' is empty or contains a delimiter");
      }
      if (!seen.insert(id).second) throw DataError("duplicate identifier '" + id + "'");
    }
  }
  for (const std::string& name : label_names) {
    if (!is_clean_token(name)) {
      throw DataError("label name '" + name + "' is empty or contains a delimiter");
    }
  }
  if (label_names[0] == label_names[1]) {
    throw DataError("label names must be distinct");
  }
}

FunctionalDataset FunctionalDataset::subset(const std::vector<uint32_t>& rows) const {
  const std::size_t m = grid.size();
  FunctionalDataset out{grid, {}, {}, {}, label_names};
  out.values.reserve(rows.size() * m);
  out.labels.reserve(rows.size());
  if (has_ids()) out.ids.reserve(rows.size());
  for (uint32_t r : rows) {
    if (r >= curve_count()) throw DataError("subset row index out of range");
    const double* src = curve(r);
    out.values.insert(out.values.end(), src, src + m);
    out.labels.push_back(labels[r]);
    if (has_ids()) out.ids.push_back(ids[r]);
  }
  return out;
}

FunctionalDataset load_csv(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed to read input stream");

  // Split into lines; a trailing final newline does not open an extra row.
  std::vector<std::string_view> lines;
  {
    std::string_view rest(text);
    while (!rest.empty()) {
      const std::size_t nl = rest.find('\n');
      std::string_view line = rest.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  if (lines.empty()) throw DataError("empty input");

  const std::vector<std::string_view> header = split_cells(lines[0]);
  bool has_ids = false;
  if (header[0] == "id") {
    has_ids = true;
  } else if (header[0] != "label") {
    throw DataError(position(1, 1) +
                    ": malformed header; expected 'id' or 'label', got '" +
                    std::string(header[0]) + "'");
  }
  const std::size_t label_col = has_ids ? 1 : 0;
  if (has_ids && (header.size() < 2 || header[1] != "label")) {
    throw DataError(position(1, 2) + ": malformed header; expected 'label' after 'id'");
  }
  const std::size_t first_grid_col = label_col + 1;
  std::vector<double> grid_points;
  grid_points.reserve(header.size() - first_grid_col);
  for (std::size_t c = first_grid_col; c < header.size(); ++c) {
    grid_points.push_back(parse_cell(header[c], 1, c + 1, "grid point"));
  }
  Grid grid = [&] {
    try {
      return Grid(std::move(grid_points));
    } catch (const DataError& e) {
      throw DataError("row 1: " + std::string(e.what()));
    }
  }();
  const std::size_t m = grid.size();
  const std::size_t expected_cells = first_grid_col + m;  // [id,] label, v_1..v_m

  FunctionalDataset d{std::move(grid), {}, {}, {}, {"A", "B"}};
  std::vector<std::string> tokens;  // distinct label tokens, in encounter order
  std::unordered_set<std::string> seen_ids;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t row = li + 1;
    const std::vector<std::string_view> cells = split_cells(lines[li]);
    if (cells.size() != expected_cells) {
      throw DataError("row " + std::to_string(row) + ": expected " +
                      std::to_string(expected_cells) + " cells, got " +
                      std::to_string(cells.size()));
    }
    if (has_ids) {
      std::string id(cells[0]);
      if (id.empty()) throw DataError(position(row, 1) + ": empty identifier");
      if (!seen_ids.insert(id).second) {
        throw DataError(position(row, 1) + ": duplicate identifier '" + id + "'");
      }
      d.ids.push_back(std::move(id));
    }
    const std::string token(cells[label_col]);
    if (token.empty()) {
      throw DataError(position(row, label_col + 1) + ": empty label token");
    }
    auto it = std::find(tokens.begin(), tokens.end(), token);
    if (it == tokens.end()) {
      if (tokens.size() == 2) {
        throw DataError(position(row, label_col + 1) + ": unknown label token '" +
                        token + "'; already have '" + tokens[0] + "' and '" +
                        tokens[1] + "'");
      }
      tokens.push_back(token);
      it = tokens.end() - 1;
    }
    d.labels.push_back(static_cast<int>(it - tokens.begin()));
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t c = first_grid_col + j;
      d.values.push_back(parse_cell(cells[c], row, c + 1, "value"));
    }
  }
  if (d.labels.empty()) throw DataError("no data rows");
  if (!tokens.empty()) d.label_names[0] = tokens[0];
  if (tokens.size() > 1) {
    d.label_names[1] = tokens[1];
  } else if (d.label_names[0] == d.label_names[1]) {
    d.label_names[1] = "A";  // lone group happened to be named like the default
  }
  d.validate();
  return d;
}

FunctionalDataset load_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  return load_csv(in);
}

std::string to_csv(const FunctionalDataset& d) {
  d.validate();
  std::string out;
  const std::size_t m = d.grid.size();
  out.reserve((d.curve_count() + 1) * (m + 2) * 8);
  if (d.has_ids()) out += "id,";
  out += "label";
  for (double t : d.grid.points()) {
    out += ',';
    append_double(out, t);
  }
  out += '\n';
  for (std::size_t i = 0; i < d.curve_count(); ++i) {
    if (d.has_ids()) {
      out += d.ids[i];
      out += ',';
    }
    out += d.label_names[static_cast<std::size_t>(d.labels[i])];
    const double* v = d.curve(i);
    for (std::size_t j = 0; j < m; ++j) {
      out += ',';
      append_double(out, v[j]);
    }
    out += '\n';
  }
  return out;
}

void save_csv(const FunctionalDataset& d, std::ostream& out) {
  const std::string text = to_csv(d);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed to write output stream");
}

void save_csv_file(const FunctionalDataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  save_csv(d, out);
}

namespace {

// Selects `take` of the given rows, shuffling deterministically. When ids are
// present, rows are keyed by id first so the choice is invariant to input
// row order.
std::vector<uint32_t> pick_train_rows(const FunctionalDataset& d,
                                      std::vector<uint32_t> rows, std::size_t take,
                                      uint64_t seed) {
  if (d.has_ids()) {
    std::sort(rows.begin(), rows.end(), [&](uint32_t a, uint32_t b) {
      return d.ids[a] < d.ids[b];
    });
  }
  Rng rng(seed);
  rng.shuffle(rows);
  rows.resize(take);
  return rows;
}

}  // namespace

std::pair<FunctionalDataset, FunctionalDataset> split(const FunctionalDataset& d,
                                                      const SplitSpec& spec) {
  d.validate();
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw DataError("train fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = d.curve_count();
  if (n < 2) throw DataError("need at least 2 curves to split");

  std::vector<uint32_t> train_rows;
  if (spec.stratified) {
    const std::array<std::size_t, 2> sizes = d.group_sizes();
    std::array<std::size_t, 2> take{0, 0};
    std::array<double, 2> frac{0.0, 0.0};
    std::size_t base_total = 0;
    for (int g = 0; g < 2; ++g) {
      if (sizes[g] == 0) continue;
      if (sizes[g] < 2) {
        throw DataError("group '" + d.label_names[g] +
                        "' has fewer than 2 curves; cannot split stratified");
      }
      const double want = spec.train_fraction * static_cast<double>(sizes[g]);
      take[g] = static_cast<std::size_t>(std::floor(want));
      frac[g] = want - std::floor(want);
      base_total += take[g];
    }
    const auto target_total =
        static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
    std::size_t remainder = target_total > base_total ? target_total - base_total : 0;
    // Hand out the remainder by largest fractional part, ties to group 0.
    std::array<int, 2> order = frac[1] > frac[0] ? std::array<int, 2>{1, 0}
                                                 : std::array<int, 2>{0, 1};
    for (int g : order) {
      if (remainder == 0 || sizes[g] == 0) continue;
      take[g]++;
      remainder--;
    }
    for (int g = 0; g < 2; ++g) {
      if (sizes[g] == 0) continue;
      take[g] = std::clamp<std::size_t>(take[g], 1, sizes[g] - 1);
      const uint64_t seed = derive_seed(spec.seed, static_cast<uint64_t>(g) + 1);
      std::vector<uint32_t> picked =
          pick_train_rows(d, d.group_rows(g), take[g], seed);
      train_rows.insert(train_rows.end(), picked.begin(), picked.end());
    }
  } else {
    const auto want =
        static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
    const std::size_t take = std::clamp<std::size_t>(want, 1, n - 1);
    std::vector<uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    train_rows = pick_train_rows(d, std::move(all), take, derive_seed(spec.seed, 0));
  }

  std::sort(train_rows.begin(), train_rows.end());
  std::vector<uint32_t> test_rows;
  test_rows.reserve(n - train_rows.size());
  std::size_t cursor = 0;
  for (uint32_t i = 0; i < n; ++i) {
    if (cursor < train_rows.size() && train_rows[cursor] == i) {
      cursor++;
    } else {
      test_rows.push_back(i);
    }
  }
  return {d.subset(train_rows), d.subset(test_rows)};
}

}  // namespace eeclass
