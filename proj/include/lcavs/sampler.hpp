#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lcavs/posterior.hpp"
#include "lcavs/rng.hpp"

namespace lcavs {

struct MoveParams {
  double p_g = 0.5;           // eject-proposal probability away from the bounds
  double eject_shape_a = 1.0; // Beta(a, a) shape for the eject split draw
};

struct SamplerState {
  int g;
  std::vector<int> z;  // 0-based group labels, length N
  InclusionPartition part;
  double pi;
  SuffStats stats;
};

struct AcceptCounts {
  int64_t eject_proposed = 0, eject_accepted = 0;
  int64_t absorb_proposed = 0, absorb_accepted = 0;
  int64_t include_proposed = 0, include_accepted = 0;
  int64_t exclude_proposed = 0, exclude_accepted = 0;
};

struct TraceRecord {
  int64_t sweep;
  double log_posterior;
  int g;
  int n_included;
  double pi;
};

/**
 * Retained per-sweep records. Search runs keep the scalar record plus the
 * inclusion mask; frozen auxiliary runs additionally keep membership
 * snapshots and the count tables (N_g, S_gmc over the frozen variable set)
 * that post-hoc estimation consumes.
 */
struct Trace {
  int n_vars = 0;
  std::vector<TraceRecord> records;
  std::vector<uint8_t> masks;  // records x n_vars
  AcceptCounts accepts;

  bool has_z = false;
  int n_items = 0;
  std::vector<uint16_t> z;  // records x n_items, 0-based labels

  bool has_snapshots = false;
  int snap_g = 0;
  std::vector<int> snap_vars;  // 0-based variables covered by the snapshots
  std::vector<int> snap_cats;  // C_m per snapshot variable
  std::vector<int> snap_offsets;
  int snap_stride = 0;
  std::vector<int32_t> snap_sizes;   // records x snap_g
  std::vector<int32_t> snap_counts;  // records x snap_g x snap_stride

  size_t size() const { return records.size(); }
  std::span<const uint8_t> mask(size_t t) const {
    return {masks.data() + t * n_vars, static_cast<size_t>(n_vars)};
  }
  std::span<const uint16_t> z_at(size_t t) const {
    return {z.data() + t * n_items, static_cast<size_t>(n_items)};
  }
  std::span<int32_t> sizes_at(size_t t) {
    return {snap_sizes.data() + t * snap_g, static_cast<size_t>(snap_g)};
  }
  std::span<const int32_t> sizes_at(size_t t) const {
    return {snap_sizes.data() + t * snap_g, static_cast<size_t>(snap_g)};
  }
  int32_t snap_count(size_t t, int g, int vi, int c) const {
    return snap_counts[(t * snap_g + g) * snap_stride + snap_offsets[vi] + c - 1];
  }
};

struct SamplerOptions {
  bool g_moves = true;
  bool var_moves = true;
  bool snapshots = false;  // only legal with both move types disabled
  std::optional<InclusionPartition> initial_mask;  // default: everything in
  uint64_t rng_stream = 0;
};

namespace sampler {

enum class MoveType { kNone, kEject, kAbsorb, kInclude, kExclude };

struct MoveOutcome {
  MoveType type = MoveType::kNone;
  bool accepted = false;
  double log_accept = 0.0;
};

SamplerState init_state(const CategoricalDataset& data, const Priors& priors,
                        const RunConfig& cfg, const SamplerOptions& opts,
                        Rng& rng);

// One systematic-scan pass over all items, resampling each membership from
// its full conditional. Fixed ascending visit order.
void gibbs_sweep_memberships(SamplerState& state, const CategoricalDataset& data,
                             const Priors& priors, Rng& rng);

MoveOutcome eject_or_absorb(SamplerState& state, const CategoricalDataset& data,
                            const Priors& priors, const MoveParams& mp, Rng& rng);

MoveOutcome variable_move(SamplerState& state, const CategoricalDataset& data,
                          const Priors& priors, Rng& rng);

// Draw pi from Beta(|included| + a0, |excluded| + b0); hyper mode only.
void update_pi(SamplerState& state, const Priors& priors, Rng& rng);

Trace run(const CategoricalDataset& data, const Priors& priors,
          const RunConfig& cfg, const MoveParams& mp = {},
          const SamplerOptions& opts = {});

// Eject-proposal probability at a state with g groups (1 at g = 1, 0 at
// g = g_max, p_g otherwise).
double eject_probability(int g, const MoveParams& mp, int g_max);

// log acceptance ratio of an eject from group k producing `candidate`
// (current stats plus a new last group holding the moved members).
double log_eject_accept(const SamplerState& state, const Priors& priors,
                        const MoveParams& mp, int k, const SuffStats& candidate);

// log acceptance ratio of absorbing group k into k2 at the current state.
double log_absorb_accept(const SamplerState& state, const Priors& priors,
                         const MoveParams& mp, int k, int k2);

}  // namespace sampler
}  // namespace lcavs
