#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lcavs/dataset.hpp"

namespace lcavs {

/**
 * The count tables behind every posterior evaluation:
 *   group_size(g)        N_g    items in group g
 *   count(g, m, c)       N_gmc  items in group g with code c at variable m
 *   marginal(m, c)       N_mc   items with code c at variable m (fixed)
 *
 * Counts are kept for every variable regardless of the current inclusion
 * partition, so a variable move costs O(G * C_j) with no pass over the data.
 * Groups may be empty; they arise transiently in eject proposals.
 *
 * Rows are laid out contiguously (stride = sum of C_m) so the membership
 * sweep can walk a group's row with plain offsets.
 */
class SuffStats {
 public:
  SuffStats(const CategoricalDataset& data, std::span<const int> z, int n_groups);

  int n_groups() const { return static_cast<int>(group_sizes_.size()); }
  int n_items() const { return data_->n_items(); }
  int n_vars() const { return data_->n_vars(); }
  const CategoricalDataset& data() const { return *data_; }

  int32_t group_size(int g) const { return group_sizes_[g]; }
  // Total items currently counted (equals n_items except mid-operation).
  int64_t total_items() const {
    int64_t s = 0;
    for (int32_t v : group_sizes_) s += v;
    return s;
  }
  // c is a 1-based category code.
  int32_t count(int g, int m, int c) const {
    return counts_[static_cast<size_t>(g) * stride_ + offsets_[m] + c - 1];
  }
  int32_t marginal(int m, int c) const { return marginal_[offsets_[m] + c - 1]; }

  int stride() const { return stride_; }
  const std::vector<int>& offsets() const { return offsets_; }
  std::span<const int32_t> group_row(int g) const {
    return {counts_.data() + static_cast<size_t>(g) * stride_,
            static_cast<size_t>(stride_)};
  }

  void add_item(int n, int g);
  void remove_item(int n, int g);

  // Equivalent to remove_item(n, from) + add_item(n, to); no-op when equal.
  void move_item(int n, int from, int to);

  /**
   * Counts for the G+1 configuration in which `members` (item indices,
   * currently all in group `from`) occupy a new last group. The receiver is
   * left untouched; accept by adopting the returned value.
   */
  SuffStats split_counts(std::span<const int> members, int from) const;

  void append_empty_group();
  // Fold group k's counts into group `into` and zero k.
  void merge_groups(int k, int into);
  void swap_groups(int a, int b);
  // Drop the last group; it must be empty.
  void pop_last_group();

  bool operator==(const SuffStats& other) const = default;

  // Verify the three sum invariants and agreement with a fresh tally of z;
  // throws InternalError on any mismatch.
  void check_consistent(std::span<const int> z) const;

 private:
  const CategoricalDataset* data_;
  int stride_;
  std::vector<int> offsets_;           // per-variable start within a row
  std::vector<int32_t> group_sizes_;   // N_g
  std::vector<int32_t> counts_;        // N_gmc, n_groups x stride
  std::vector<int32_t> marginal_;      // N_mc
};

}  // namespace lcavs
