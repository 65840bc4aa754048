#include "lcavs/suffstats.hpp"

#include <algorithm>
#include <string>

namespace lcavs {

SuffStats::SuffStats(const CategoricalDataset& data, std::span<const int> z,
                     int n_groups)
    : data_(&data) {
  if (static_cast<int>(z.size()) != data.n_items())
    throw ValidationError("membership vector length does not match n_items");
  offsets_.resize(data.n_vars());
  int off = 0;
  for (int m = 0; m < data.n_vars(); ++m) {
    offsets_[m] = off;
    off += data.n_categories(m);
  }
  stride_ = off;
  group_sizes_.assign(n_groups, 0);
  counts_.assign(static_cast<size_t>(n_groups) * stride_, 0);
  marginal_.assign(stride_, 0);
  for (int n = 0; n < data.n_items(); ++n) {
    int g = z[n];
    if (g < 0 || g >= n_groups)
      throw ValidationError("membership label " + std::to_string(g + 1) +
                            " of item " + std::to_string(n + 1) +
                            " outside 1.." + std::to_string(n_groups));
    ++group_sizes_[g];
    int32_t* row = counts_.data() + static_cast<size_t>(g) * stride_;
    auto cells = data.row(n);
    for (int m = 0; m < data.n_vars(); ++m) {
      ++row[offsets_[m] + cells[m] - 1];
      ++marginal_[offsets_[m] + cells[m] - 1];
    }
  }
}

void SuffStats::add_item(int n, int g) {
  ++group_sizes_[g];
  int32_t* row = counts_.data() + static_cast<size_t>(g) * stride_;
  auto cells = data_->row(n);
  for (int m = 0; m < data_->n_vars(); ++m) ++row[offsets_[m] + cells[m] - 1];
}

void SuffStats::remove_item(int n, int g) {
  if (--group_sizes_[g] < 0)
    throw InternalError("group size went negative removing item " +
                        std::to_string(n + 1));
  int32_t* row = counts_.data() + static_cast<size_t>(g) * stride_;
  auto cells = data_->row(n);
  for (int m = 0; m < data_->n_vars(); ++m) {
    if (--row[offsets_[m] + cells[m] - 1] < 0)
      throw InternalError("count table went negative removing item " +
                          std::to_string(n + 1));
  }
}

void SuffStats::move_item(int n, int from, int to) {
  if (from == to) return;
  remove_item(n, from);
  add_item(n, to);
}

SuffStats SuffStats::split_counts(std::span<const int> members, int from) const {
  SuffStats out = *this;
  out.append_empty_group();
  int to = out.n_groups() - 1;
  for (int n : members) {
    if (out.group_sizes_[from] == 0)
      throw ValidationError("split member " + std::to_string(n + 1) +
                            " is not in the source group");
    out.move_item(n, from, to);
  }
  return out;
}

void SuffStats::append_empty_group() {
  group_sizes_.push_back(0);
  counts_.resize(counts_.size() + stride_, 0);
}

void SuffStats::merge_groups(int k, int into) {
  group_sizes_[into] += group_sizes_[k];
  group_sizes_[k] = 0;
  int32_t* src = counts_.data() + static_cast<size_t>(k) * stride_;
  int32_t* dst = counts_.data() + static_cast<size_t>(into) * stride_;
  for (int i = 0; i < stride_; ++i) {
    dst[i] += src[i];
    src[i] = 0;
  }
}

void SuffStats::swap_groups(int a, int b) {
  if (a == b) return;
  std::swap(group_sizes_[a], group_sizes_[b]);
  std::swap_ranges(counts_.begin() + static_cast<size_t>(a) * stride_,
                   counts_.begin() + static_cast<size_t>(a + 1) * stride_,
                   counts_.begin() + static_cast<size_t>(b) * stride_);
}

void SuffStats::pop_last_group() {
  if (group_sizes_.back() != 0)
    throw InternalError("attempt to drop a non-empty group");
  group_sizes_.pop_back();
  counts_.resize(counts_.size() - stride_);
}

void SuffStats::check_consistent(std::span<const int> z) const {
  SuffStats fresh(*data_, z, n_groups());
  if (fresh.group_sizes_ != group_sizes_ || fresh.counts_ != counts_ ||
      fresh.marginal_ != marginal_)
    throw InternalError("sufficient statistics diverged from a fresh tally");
  int64_t total = 0;
  for (int g = 0; g < n_groups(); ++g) total += group_sizes_[g];
  if (total != data_->n_items())
    throw InternalError("group sizes do not sum to N");
  for (int g = 0; g < n_groups(); ++g) {
    for (int m = 0; m < n_vars(); ++m) {
      int64_t s = 0;
      for (int c = 1; c <= data_->n_categories(m); ++c) s += count(g, m, c);
      if (s != group_sizes_[g])
        throw InternalError("N_gmc does not sum to N_g");
    }
  }
  for (int m = 0; m < n_vars(); ++m) {
    for (int c = 1; c <= data_->n_categories(m); ++c) {
      int64_t s = 0;
      for (int g = 0; g < n_groups(); ++g) s += count(g, m, c);
      if (s != marginal(m, c))
        throw InternalError("N_gmc does not sum to N_mc");
    }
  }
}

}  // namespace lcavs
