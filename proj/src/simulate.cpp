#include "lcavs/simulate.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "lcavs/common.hpp"
#include "lcavs/rng.hpp"

namespace lcavs::simulate {

int GenerativeSpec::stride() const {
  return std::accumulate(categories.begin(), categories.end(), 0);
}

int GenerativeSpec::offset(int m) const {
  return std::accumulate(categories.begin(), categories.begin() + m, 0);
}

void GenerativeSpec::validate() const {
  if (g < 1) throw ValidationError("spec g: must be at least 1");
  if (n_items < 1) throw ValidationError("spec n_items: must be at least 1");
  if (categories.empty()) throw ValidationError("spec categories: empty");
  for (size_t m = 0; m < categories.size(); ++m)
    if (categories[m] < 2)
      throw ValidationError("spec categories: variable " + std::to_string(m + 1) +
                            " has fewer than 2 categories");
  if (static_cast<int>(weights.size()) != g)
    throw ValidationError("spec weights: length must equal g");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w > 0)) throw ValidationError("spec weights: must be positive");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw ValidationError("spec weights: must sum to 1");
  if (theta.size() != static_cast<size_t>(g) * stride())
    throw ValidationError("spec theta: wrong size");
  for (int cls = 0; cls < g; ++cls) {
    for (int m = 0; m < n_vars(); ++m) {
      double s = 0.0;
      for (int c = 1; c <= categories[m]; ++c) {
        double p = prob(cls, m, c);
        if (p < 0 || p > 1)
          throw ValidationError("spec theta: probability outside [0, 1]");
        s += p;
      }
      if (std::abs(s - 1.0) > 1e-12)
        throw ValidationError("spec theta: class " + std::to_string(cls + 1) +
                              ", variable " + std::to_string(m + 1) +
                              " does not sum to 1");
    }
  }
}

LabeledDataset generate(const GenerativeSpec& spec, uint64_t seed) {
  spec.validate();
  Rng rng(seed, 0);
  const int n = spec.n_items;
  const int m_vars = spec.n_vars();

  std::vector<int> truth(n);
  std::vector<int32_t> cells(static_cast<size_t>(n) * m_vars);
  for (int i = 0; i < n; ++i) {
    int cls = rng.categorical(spec.weights, 1.0);
    truth[i] = cls;
    for (int m = 0; m < m_vars; ++m) {
      double u = rng.uniform();
      double acc = 0.0;
      int code = spec.categories[m];
      for (int c = 1; c <= spec.categories[m]; ++c) {
        acc += spec.prob(cls, m, c);
        if (u < acc) {
          code = c;
          break;
        }
      }
      cells[static_cast<size_t>(i) * m_vars + m] = code;
    }
  }

  CategoricalDataset data(n, m_vars, spec.categories, std::move(cells));

  // Bayes-rule labels under the generating parameters; ties go to the
  // smallest class index.
  std::vector<int> oracle(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_lp = -std::numeric_limits<double>::infinity();
    for (int cls = 0; cls < spec.g; ++cls) {
      double lp = std::log(spec.weights[cls]);
      for (int m = 0; m < m_vars; ++m)
        lp += std::log(spec.prob(cls, m, data.at(i, m)));
      if (lp > best_lp) {
        best_lp = lp;
        best = cls;
      }
    }
    oracle[i] = best;
  }
  return {std::move(data), std::move(truth), std::move(oracle)};
}

namespace {

GenerativeSpec dr_binary(int n_items) {
  // Per-variable probability of category 1 in the two classes.
  constexpr double kClass1[13] = {0.6, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3,
                                  0.2, 0.9, 0.6, 0.7, 0.8, 0.1};
  constexpr double kClass2[13] = {0.2, 0.5, 0.4, 0.9, 0.5, 0.4, 0.3,
                                  0.2, 0.9, 0.6, 0.7, 0.8, 0.1};
  GenerativeSpec spec;
  spec.g = 2;
  spec.n_items = n_items > 0 ? n_items : 500;
  spec.categories.assign(13, 2);
  spec.weights = {0.6, 0.4};
  spec.theta.reserve(2 * 26);
  for (const double* cls : {kClass1, kClass2})
    for (int m = 0; m < 13; ++m) {
      spec.theta.push_back(cls[m]);
      spec.theta.push_back(1.0 - cls[m]);
    }
  return spec;
}

GenerativeSpec dr_nonbinary(int n_items) {
  GenerativeSpec spec;
  spec.g = 3;
  spec.n_items = n_items > 0 ? n_items : 1000;
  spec.categories = {3, 2, 4, 3, 3, 4, 5, 2, 3, 4};
  spec.weights = {0.3, 0.4, 0.3};

  // Discriminating variables 1-4, one row per class.
  const std::vector<std::vector<std::vector<double>>> informative = {
      {{0.1, 0.1, 0.8}, {0.3, 0.5, 0.2}, {0.6, 0.2, 0.2}},
      {{0.5, 0.5}, {0.1, 0.9}, {0.7, 0.3}},
      {{0.2, 0.2, 0.3, 0.3}, {0.7, 0.1, 0.1, 0.1}, {0.2, 0.6, 0.1, 0.1}},
      {{0.1, 0.5, 0.4}, {0.6, 0.1, 0.3}, {0.4, 0.4, 0.2}},
  };
  // Non-discriminating variables 5-10, shared across classes.
  const std::vector<std::vector<double>> noise = {
      {0.4, 0.5, 0.1},
      {0.2, 0.4, 0.1, 0.3},
      {0.2, 0.3, 0.3, 0.1, 0.1},
      {0.2, 0.8},
      {0.7, 0.1, 0.2},
      {0.1, 0.2, 0.1, 0.6},
  };

  for (int cls = 0; cls < 3; ++cls) {
    for (int m = 0; m < 4; ++m)
      for (double p : informative[m][cls]) spec.theta.push_back(p);
    for (const auto& row : noise)
      for (double p : row) spec.theta.push_back(p);
  }
  return spec;
}

}  // namespace

GenerativeSpec builtin_spec(const std::string& name, int n_items) {
  GenerativeSpec spec;
  if (name == "dr-binary") {
    spec = dr_binary(n_items);
  } else if (name == "dr-nonbinary") {
    spec = dr_nonbinary(n_items);
  } else {
    throw ValidationError("unknown benchmark spec: " + name);
  }
  spec.validate();
  return spec;
}

}  // namespace lcavs::simulate
