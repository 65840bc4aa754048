#include "lcavs/dataset.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace lcavs {

namespace {

// Strict integer parse of a trimmed field; nullopt on anything else.
std::optional<long> parse_int(std::string_view field) {
  size_t b = field.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return std::nullopt;
  size_t e = field.find_last_not_of(" \t\r");
  field = field.substr(b, e - b + 1);
  long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

CategoricalDataset::CategoricalDataset(int n_items, int n_vars,
                                       std::vector<int> categories,
                                       std::vector<int32_t> cells)
    : n_items_(n_items),
      n_vars_(n_vars),
      categories_(std::move(categories)),
      cells_(std::move(cells)) {
  if (n_items_ < 1) throw ValidationError("n_items: need at least one item");
  if (n_vars_ < 1) throw ValidationError("n_vars: need at least one variable");
  if (static_cast<int>(categories_.size()) != n_vars_)
    throw ValidationError("categories: length must equal n_vars");
  if (cells_.size() != static_cast<size_t>(n_items_) * n_vars_)
    throw ValidationError("cells: size must equal n_items * n_vars");
  for (int m = 0; m < n_vars_; ++m) {
    if (categories_[m] < 2)
      throw ValidationError("categories: variable " + std::to_string(m + 1) +
                            " has fewer than 2 categories");
  }
  for (int n = 0; n < n_items_; ++n) {
    for (int m = 0; m < n_vars_; ++m) {
      int32_t x = at(n, m);
      if (x < 1 || x > categories_[m])
        throw ValidationError("cells: code " + std::to_string(x) + " at row " +
                              std::to_string(n + 1) + ", column " +
                              std::to_string(m + 1) + " outside 1.." +
                              std::to_string(categories_[m]));
    }
  }
  total_categories_ = std::accumulate(categories_.begin(), categories_.end(), 0);
}

CategoricalDataset load_dataset(
    const std::filesystem::path& path,
    const std::optional<std::vector<int>>& declared_categories) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file: " + path.string());

  std::vector<std::vector<long>> rows;
  std::string line;
  int lineno = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    std::vector<long> row;
    row.reserve(fields.size());
    bool ok = true;
    for (size_t m = 0; m < fields.size(); ++m) {
      auto v = parse_int(fields[m]);
      if (!v) {
        if (first_data_line) {
          ok = false;  // header row
          break;
        }
        throw ParseError("non-integer cell at row " + std::to_string(lineno) +
                         ", column " + std::to_string(m + 1) + ": '" +
                         fields[m] + "'");
      }
      row.push_back(*v);
    }
    if (!ok) {
      first_data_line = false;  // consumed the header
      continue;
    }
    first_data_line = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row " + std::to_string(lineno) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("dataset file has no data rows: " + path.string());

  int n_items = static_cast<int>(rows.size());
  int n_vars = static_cast<int>(rows.front().size());

  std::vector<int> categories;
  if (declared_categories) {
    if (static_cast<int>(declared_categories->size()) != n_vars)
      throw ValidationError("declared_categories: length " +
                            std::to_string(declared_categories->size()) +
                            " does not match " + std::to_string(n_vars) +
                            " columns");
    categories = *declared_categories;
  } else {
    categories.assign(n_vars, 0);
    for (const auto& row : rows)
      for (int m = 0; m < n_vars; ++m)
        categories[m] = std::max<long>(categories[m], row[m]);
  }

  std::vector<int32_t> cells;
  cells.reserve(static_cast<size_t>(n_items) * n_vars);
  for (int n = 0; n < n_items; ++n) {
    for (int m = 0; m < n_vars; ++m) {
      long x = rows[n][m];
      if (x < 1 || x > categories[m])
        throw ParseError("code " + std::to_string(x) + " at row " +
                         std::to_string(n + 1) + ", column " +
                         std::to_string(m + 1) + " outside 1.." +
                         std::to_string(categories[m]) +
                         " (codes are 1-based)");
      cells.push_back(static_cast<int32_t>(x));
    }
  }
  for (int m = 0; m < n_vars; ++m) {
    if (categories[m] < 2)
      throw ParseError("column " + std::to_string(m + 1) +
                       " is degenerate: only category 1 observed and no "
                       "larger category count declared");
  }
  return CategoricalDataset(n_items, n_vars, std::move(categories), std::move(cells));
}

void save_csv(const CategoricalDataset& data, const std::filesystem::path& path,
              bool header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write dataset file: " + path.string());
  if (header) {
    for (int m = 0; m < data.n_vars(); ++m)
      out << (m ? "," : "") << "v" << (m + 1);
    out << "\n";
  }
  for (int n = 0; n < data.n_items(); ++n) {
    for (int m = 0; m < data.n_vars(); ++m)
      out << (m ? "," : "") << data.at(n, m);
    out << "\n";
  }
}

void validate_priors(const Priors& priors) {
  if (!(priors.alpha > 0)) throw ValidationError("alpha: must be positive");
  if (!(priors.beta > 0)) throw ValidationError("beta: must be positive");
  if (priors.g_max < 1) throw ValidationError("g_max: must be at least 1");
  if (!(priors.poisson_rate > 0))
    throw ValidationError("poisson_rate: must be positive");
  if (priors.pi_mode.is_hyper()) {
    if (!(priors.pi_mode.a0 > 0)) throw ValidationError("a0: must be positive");
    if (!(priors.pi_mode.b0 > 0)) throw ValidationError("b0: must be positive");
  } else {
    if (!(priors.pi_mode.pi > 0) || !(priors.pi_mode.pi < 1))
      throw ValidationError("pi: must lie strictly inside (0, 1)");
  }
}

void validate_config(const RunConfig& cfg, const Priors& priors,
                     const CategoricalDataset& data) {
  validate_priors(priors);
  if (cfg.iterations <= 0) throw ValidationError("iterations: must be positive");
  if (cfg.burn_in < 0) throw ValidationError("burn_in: must be non-negative");
  if (cfg.thin < 1) throw ValidationError("thin: must be at least 1");
  if (cfg.initial_g < 1 || cfg.initial_g > priors.g_max)
    throw ValidationError("initial_g: must lie in 1..g_max");
  if (priors.g_max > data.n_items())
    throw ValidationError("g_max: exceeds the number of items");
}

}  // namespace lcavs
