#pragma once

#include <string>
#include <vector>

#include "lcavs/dataset.hpp"

namespace lcavs::simulate {

/**
 * Ground-truth generator for a latent class model: weights over g classes
 * and per (class, variable) category probabilities. theta is laid out
 * class-major with one block of C_m probabilities per variable.
 */
struct GenerativeSpec {
  int g = 0;
  int n_items = 0;
  std::vector<int> categories;  // C_m per variable
  std::vector<double> weights;  // simplex over classes
  std::vector<double> theta;    // g x sum(C_m)

  int n_vars() const { return static_cast<int>(categories.size()); }
  int stride() const;
  int offset(int m) const;
  double prob(int cls, int m, int c) const {  // c is 1-based
    return theta[static_cast<size_t>(cls) * stride() + offset(m) + c - 1];
  }

  // Simplex and category-count invariants; throws ValidationError.
  void validate() const;
};

struct LabeledDataset {
  CategoricalDataset data;
  std::vector<int> truth;   // generating class per item, 0-based
  std::vector<int> oracle;  // Bayes-rule class under the true parameters
};

LabeledDataset generate(const GenerativeSpec& spec, uint64_t seed);

// The two built-in benchmark presets; n_items <= 0 keeps the
// published default (500 binary / 1000 non-binary).
GenerativeSpec builtin_spec(const std::string& name, int n_items = 0);

}  // namespace lcavs::simulate
