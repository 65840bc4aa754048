#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lcavs/sampler.hpp"

namespace lcavs::relabel {

/**
 * Running tallies over already-relabeled samples: r(n, g) counts how many of
 * the t_seen incorporated samples assigned item n to group g. These give the
 * cost matrix in O(N * G) per sample instead of re-walking sample history.
 */
class RunningCounts {
 public:
  RunningCounts(int n_items, int n_groups);

  int n_items() const { return n_items_; }
  int n_groups() const { return n_groups_; }
  int64_t t_seen() const { return t_seen_; }
  int32_t r(int n, int g) const {
    return r_[static_cast<size_t>(n) * n_groups_ + g];
  }

  template <typename Label>
  void incorporate(std::span<const Label> z) {
    for (int n = 0; n < n_items_; ++n)
      ++r_[static_cast<size_t>(n) * n_groups_ + z[n]];
    ++t_seen_;
  }

 private:
  int n_items_;
  int n_groups_;
  int64_t t_seen_;
  std::vector<int32_t> r_;
};

// C(g, h) = sum_n (t_seen - r(n, g)) * [z_new(n) = h], row-major G x G.
template <typename Label>
std::vector<int64_t> build_cost(const RunningCounts& rc,
                                std::span<const Label> z_new);

/**
 * Minimum-cost square assignment: returns sigma with sigma[row] = column
 * minimizing sum_g cost[g][sigma(g)]. O(G^3). Ties are broken toward the
 * identity permutation, so a zero matrix yields the identity.
 */
std::vector<int> solve_assignment(std::span<const int64_t> cost, int g);

// Relabel z in place so that items labeled sigma[g] become g.
template <typename Label>
void apply_assignment(std::span<const int> sigma, std::span<Label> z);

/**
 * Sequentially undo label switching across a fixed-G stream of membership
 * vectors: the first sample anchors the labels, each later sample is permuted
 * to best match the running counts of everything already relabeled.
 */
std::vector<std::vector<int>> relabel_stream(
    const std::vector<std::vector<int>>& samples, int g);

// Same procedure applied in place to a frozen auxiliary trace, permuting the
// stored memberships and count snapshots together.
void relabel_trace(Trace& trace);

}  // namespace lcavs::relabel
