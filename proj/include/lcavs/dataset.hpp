#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcavs/common.hpp"

namespace lcavs {

/**
 * An N x M matrix of 1-based category codes. Column m takes values in
 * 1..categories[m]; categories[m] >= 2 always. Immutable after construction
 * and safe to share across concurrently running chains.
 */
class CategoricalDataset {
 public:
  CategoricalDataset(int n_items, int n_vars, std::vector<int> categories,
                     std::vector<int32_t> cells);

  int n_items() const { return n_items_; }
  int n_vars() const { return n_vars_; }
  const std::vector<int>& categories() const { return categories_; }
  int n_categories(int m) const { return categories_[m]; }

  // Category code of item n, variable m (both 0-based); code itself is 1-based.
  int32_t at(int n, int m) const { return cells_[static_cast<size_t>(n) * n_vars_ + m]; }

  std::span<const int32_t> row(int n) const {
    return {cells_.data() + static_cast<size_t>(n) * n_vars_,
            static_cast<size_t>(n_vars_)};
  }

  // Sum of categories[m] over all variables.
  int total_categories() const { return total_categories_; }

 private:
  int n_items_;
  int n_vars_;
  std::vector<int> categories_;
  std::vector<int32_t> cells_;
  int total_categories_;
};

// How the prior inclusion probability pi is treated.
struct PiPrior {
  enum class Mode { kFixed, kHyper };
  Mode mode = Mode::kFixed;
  double pi = 0.5;   // fixed mode
  double a0 = 1.0;   // hyper mode: pi ~ Beta(a0, b0)
  double b0 = 1.0;

  static PiPrior fixed(double pi) { return {Mode::kFixed, pi, 1.0, 1.0}; }
  static PiPrior hyper(double a0, double b0) {
    return {Mode::kHyper, 0.5, a0, b0};
  }
  bool is_hyper() const { return mode == Mode::kHyper; }
};

struct Priors {
  double alpha = 0.5;        // Dirichlet weight on the component weights
  double beta = 1.0;         // Dirichlet weight on item probabilities
  PiPrior pi_mode;           // fixed(pi) or hyper(a0, b0)
  int g_max = 30;
  double poisson_rate = 1.0; // rate of the truncated Poisson prior on G
};

struct RunConfig {
  int64_t iterations = 50000;
  int64_t burn_in = 1000;
  int64_t thin = 10;
  uint64_t seed = 0;
  int initial_g = 1;
  bool store_z = false;
};

/**
 * Parse a CSV of integer category codes, one row per item. An optional
 * single header row is auto-detected (any non-integer field in the first
 * row). When declared_categories is given it fixes C_m per column,
 * allowing categories unseen in the sample; otherwise C_m is the maximum
 * observed code.
 */
CategoricalDataset load_dataset(
    const std::filesystem::path& path,
    const std::optional<std::vector<int>>& declared_categories = std::nullopt);

// Write the dataset back out in the loader's format (with a v1..vM header).
void save_csv(const CategoricalDataset& data, const std::filesystem::path& path,
              bool header = true);

// Check all joint invariants across config, priors and data; throws
// ValidationError naming the offending field.
void validate_config(const RunConfig& cfg, const Priors& priors,
                     const CategoricalDataset& data);

void validate_priors(const Priors& priors);

}  // namespace lcavs
