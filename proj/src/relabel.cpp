#include "lcavs/relabel.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "lcavs/common.hpp"

namespace lcavs::relabel {

RunningCounts::RunningCounts(int n_items, int n_groups)
    : n_items_(n_items), n_groups_(n_groups), t_seen_(0) {
  r_.assign(static_cast<size_t>(n_items) * n_groups, 0);
}

template <typename Label>
std::vector<int64_t> build_cost(const RunningCounts& rc,
                                std::span<const Label> z_new) {
  const int g = rc.n_groups();
  if (static_cast<int>(z_new.size()) != rc.n_items())
    throw ValidationError("sample length does not match the running counts");
  std::vector<int64_t> cost(static_cast<size_t>(g) * g, 0);
  const int64_t t = rc.t_seen();
  for (int n = 0; n < rc.n_items(); ++n) {
    int h = static_cast<int>(z_new[n]);
    if (h < 0 || h >= g)
      throw ValidationError("sample label " + std::to_string(h + 1) +
                            " outside 1.." + std::to_string(g) +
                            " (mixed-G streams are not relabelable)");
    for (int row = 0; row < g; ++row)
      cost[static_cast<size_t>(row) * g + h] += t - rc.r(n, row);
  }
  return cost;
}

std::vector<int> solve_assignment(std::span<const int64_t> cost, int g) {
  if (static_cast<int>(cost.size()) != g * g)
    throw ValidationError("cost matrix is not G x G");
  for (int64_t c : cost)
    if (c < 0) throw ValidationError("cost matrix entries must be non-negative");

  // Scale and add a one-unit penalty off the diagonal: any genuine cost
  // difference dominates, and among exact ties fixed points win.
  const int64_t scale = g + 1;
  auto entry = [&](int row, int col) -> int64_t {
    return cost[static_cast<size_t>(row) * g + col] * scale + (row != col);
  };

  // Hungarian algorithm with potentials (1-indexed working arrays).
  const int64_t inf = std::numeric_limits<int64_t>::max() / 4;
  std::vector<int64_t> u(g + 1, 0), v(g + 1, 0), minv(g + 1);
  std::vector<int> p(g + 1, 0), way(g + 1, 0);
  for (int i = 1; i <= g; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<char> used(g + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      int64_t delta = inf;
      for (int j = 1; j <= g; ++j) {
        if (used[j]) continue;
        int64_t cur = entry(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= g; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> sigma(g);
  for (int j = 1; j <= g; ++j) sigma[p[j] - 1] = j - 1;
  return sigma;
}

template <typename Label>
void apply_assignment(std::span<const int> sigma, std::span<Label> z) {
  std::vector<int> inverse(sigma.size());
  for (size_t row = 0; row < sigma.size(); ++row) inverse[sigma[row]] = row;
  for (auto& zi : z) zi = static_cast<Label>(inverse[zi]);
}

std::vector<std::vector<int>> relabel_stream(
    const std::vector<std::vector<int>>& samples, int g) {
  std::vector<std::vector<int>> out;
  if (samples.empty()) return out;
  RunningCounts rc(static_cast<int>(samples.front().size()), g);
  out.reserve(samples.size());
  for (const auto& sample : samples) {
    if (sample.size() != samples.front().size())
      throw ValidationError("samples differ in length");
    std::vector<int> relabeled = sample;
    auto cost = build_cost<int>(rc, relabeled);
    auto sigma = solve_assignment(cost, g);
    apply_assignment<int>(sigma, relabeled);
    rc.incorporate<int>(relabeled);
    out.push_back(std::move(relabeled));
  }
  return out;
}

void relabel_trace(Trace& trace) {
  if (!trace.has_z)
    throw ValidationError("relabeling needs stored memberships (store_z)");
  if (!trace.has_snapshots)
    throw ValidationError("relabeling expects a frozen run with snapshots");
  const int g = trace.snap_g;
  RunningCounts rc(trace.n_items, g);
  for (size_t t = 0; t < trace.size(); ++t) {
    std::span<uint16_t> z{trace.z.data() + t * trace.n_items,
                          static_cast<size_t>(trace.n_items)};
    auto cost = build_cost<uint16_t>(rc, z);
    auto sigma = solve_assignment(cost, g);
    apply_assignment<uint16_t>(sigma, z);
    rc.incorporate<uint16_t>(std::span<const uint16_t>(z));

    // Move snapshot rows with the same relabeling: old label l becomes
    // inverse[l], so old row l lands at row inverse[l].
    std::vector<int> inverse(g);
    for (int row = 0; row < g; ++row) inverse[sigma[row]] = row;
    std::vector<int32_t> old_sizes(trace.snap_sizes.begin() + t * g,
                                   trace.snap_sizes.begin() + (t + 1) * g);
    std::vector<int32_t> old_counts(
        trace.snap_counts.begin() + t * g * trace.snap_stride,
        trace.snap_counts.begin() + (t + 1) * g * trace.snap_stride);
    for (int old_row = 0; old_row < g; ++old_row) {
      int new_row = inverse[old_row];
      trace.snap_sizes[t * g + new_row] = old_sizes[old_row];
      std::copy(old_counts.begin() + old_row * trace.snap_stride,
                old_counts.begin() + (old_row + 1) * trace.snap_stride,
                trace.snap_counts.begin() +
                    (t * g + new_row) * trace.snap_stride);
    }
  }
}

template std::vector<int64_t> build_cost<int>(const RunningCounts&,
                                              std::span<const int>);
template std::vector<int64_t> build_cost<uint16_t>(const RunningCounts&,
                                                   std::span<const uint16_t>);
template void apply_assignment<int>(std::span<const int>, std::span<int>);
template void apply_assignment<uint16_t>(std::span<const int>,
                                         std::span<uint16_t>);

}  // namespace lcavs::relabel
