#pragma once

#include <span>
#include <vector>

#include "lcavs/sampler.hpp"

namespace lcavs::summaries {

struct GroupPosterior {
  std::vector<int64_t> counts;  // visits per k, index 0 = one group
  std::vector<double> p;        // counts / T
  int64_t total = 0;

  // 1-based modal number of groups (smallest in case of a tie).
  int modal_g() const;
};

GroupPosterior group_posterior(const Trace& trace, int g_max);

struct CoincidenceMatrix {
  int g_max = 0;
  int n_vars = 0;
  std::vector<int64_t> visits;  // per k
  std::vector<double> c;        // g_max x n_vars; rows of unvisited k unset
  std::vector<uint8_t> visited;

  double at(int k, int m) const {  // k is 1-based
    return c[static_cast<size_t>(k - 1) * n_vars + m];
  }
};

// C(k, m) = fraction of k-group sweeps that included variable m.
CoincidenceMatrix coincidence(const Trace& trace, int g_max);

// Marginal inclusion probability per variable over the whole trace.
std::vector<double> inclusion_probability(const Trace& trace);

// Fraction of item pairs on which the two partitions agree (together in
// both or apart in both); label-permutation invariant.
double rand_index(std::span<const int> a, std::span<const int> b);

// Largest agreement count between two labelings over all label bijections
// (square-assignment on the negated contingency table).
int64_t agreement_count(std::span<const int> a, std::span<const int> b);

struct AcfEss {
  std::vector<double> acf;  // lags 1..max_lag
  double ess = 0.0;
  bool degenerate = false;
};

/**
 * Sample autocorrelations and the initial-positive-sequence effective sample
 * size T / (1 + 2 sum rho_l), with the sum stopped at the first non-positive
 * autocorrelation. A constant series is flagged degenerate with ESS = T.
 */
AcfEss autocorr_ess(std::span<const double> series, int max_lag = 50);

}  // namespace lcavs::summaries
