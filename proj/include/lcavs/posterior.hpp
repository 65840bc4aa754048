#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lcavs/dataset.hpp"
#include "lcavs/suffstats.hpp"

namespace lcavs {

// Which variables currently carry the clustering (mask representation keeps
// the two index sets disjoint and exhaustive by construction).
struct InclusionPartition {
  std::vector<uint8_t> included;  // 1 = clustering variable

  static InclusionPartition all_included(int n_vars) {
    return {std::vector<uint8_t>(n_vars, 1)};
  }
  static InclusionPartition from_indices(int n_vars, std::span<const int> vars) {
    InclusionPartition p{std::vector<uint8_t>(n_vars, 0)};
    for (int v : vars) p.included[v] = 1;
    return p;
  }
  int n_vars() const { return static_cast<int>(included.size()); }
  int n_included() const {
    int k = 0;
    for (uint8_t b : included) k += b;
    return k;
  }
  std::vector<int> indices() const {
    std::vector<int> out;
    for (int m = 0; m < n_vars(); ++m)
      if (included[m]) out.push_back(m);
    return out;
  }
};

namespace posterior {

// log of the Poisson(rate) pmf at g, renormalized over {1..g_max}.
double log_prior_g(int g, const Priors& priors);

// log pi^{|included|} (1-pi)^{|excluded|}.
double log_inclusion_prior(const InclusionPartition& part, double pi);

// log Beta(a0, b0) density at pi (the hyper-mode extra term).
double log_pi_hyperprior(double pi, const Priors& priors);

/**
 * The marginalized data factor: the three gamma blocks of the collapsed
 * posterior (component weights, non-clustering variables, clustering
 * variables), including the state-independent Gamma(C_m b)/Gamma(b)^{C_m}
 * constants so values are comparable across inclusion partitions.
 */
double log_marginal_data(const SuffStats& stats, const InclusionPartition& part,
                         const Priors& priors);

/**
 * Full collapsed log posterior, up to one fixed normalizing constant:
 * log p(G) + log p(nu|pi) + data factor, plus log p(pi) in hyper mode.
 * Finite for every legal state.
 */
double log_collapsed_posterior(const SuffStats& stats,
                               const InclusionPartition& part, int g,
                               const Priors& priors, double pi);

// One group's additive contribution to the data factor: the
// lgamma(N_g + alpha) weight term plus that group's clustering-variable
// block. Eject/absorb ratios touch only these.
double log_group_block(const SuffStats& stats, int g_row,
                       const InclusionPartition& part, const Priors& priors);

/**
 * Log full-conditional weights (unnormalized) for reassigning item n, whose
 * current label is `current`, to each of the G groups. Leave-one-out counts
 * are formed internally; stats are not modified.
 */
void gibbs_membership_logweights(const SuffStats& stats,
                                 const InclusionPartition& part,
                                 const Priors& priors, int n, int current,
                                 std::span<double> out);

// Normalized version of the above (a probability vector over groups).
void gibbs_membership_probs(const SuffStats& stats,
                            const InclusionPartition& part,
                            const Priors& priors, int n, int current,
                            std::span<double> out);

/**
 * Log acceptance ratio for flipping variable j's inclusion: log R when j is
 * currently excluded (the move into the clustering set), -log R when it is
 * currently included. Exactly log p(flipped) - log p(current).
 */
double log_variable_move_ratio(const SuffStats& stats,
                               const InclusionPartition& part, int g,
                               const Priors& priors, double pi, int j);

}  // namespace posterior
}  // namespace lcavs
