#include "lcavs/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "lcavs/common.hpp"

namespace lcavs::sampler {

namespace {

// Per-sweep view of the included variables plus cached reciprocal
// denominators 1/(N_g + C_m beta), grouped by distinct category count.
struct SweepScratch {
  std::vector<int> incl_var;     // source variable index
  std::vector<int> incl_offset;  // row offset of that variable's counts
  std::vector<int> incl_class;   // distinct-C class per included variable
  std::vector<double> class_cb;  // C * beta per class
  std::vector<double> inv_den;   // n_groups x n_classes
  std::vector<double> weights;
  std::vector<double> logw;
  int n_classes = 0;

  void build(const SamplerState& state, const CategoricalDataset& data,
             const Priors& priors) {
    incl_var.clear();
    incl_offset.clear();
    incl_class.clear();
    class_cb.clear();
    const auto& offsets = state.stats.offsets();
    for (int m = 0; m < data.n_vars(); ++m) {
      if (!state.part.included[m]) continue;
      double cb = data.n_categories(m) * priors.beta;
      int cls = -1;
      for (size_t i = 0; i < class_cb.size(); ++i)
        if (class_cb[i] == cb) cls = static_cast<int>(i);
      if (cls < 0) {
        cls = static_cast<int>(class_cb.size());
        class_cb.push_back(cb);
      }
      incl_var.push_back(m);
      incl_offset.push_back(offsets[m]);
      incl_class.push_back(cls);
    }
    n_classes = static_cast<int>(class_cb.size());
    inv_den.assign(static_cast<size_t>(state.g) * std::max(n_classes, 1), 0.0);
    for (int h = 0; h < state.g; ++h) refresh_row(state, h);
    weights.resize(state.g);
    logw.resize(state.g);
  }

  void refresh_row(const SamplerState& state, int h) {
    for (int c = 0; c < n_classes; ++c)
      inv_den[static_cast<size_t>(h) * n_classes + c] =
          1.0 / (state.stats.group_size(h) + class_cb[c]);
  }
};

}  // namespace

double eject_probability(int g, const MoveParams& mp, int g_max) {
  if (g <= 1) return 1.0;
  if (g >= g_max) return 0.0;
  return mp.p_g;
}

SamplerState init_state(const CategoricalDataset& data, const Priors& priors,
                        const RunConfig& cfg, const SamplerOptions& opts,
                        Rng& rng) {
  const int n = data.n_items();
  std::vector<int> z(n, 0);
  if (cfg.initial_g > 1)
    for (int i = 0; i < n; ++i)
      z[i] = static_cast<int>(rng.uniform_below(cfg.initial_g));
  InclusionPartition part =
      opts.initial_mask.value_or(InclusionPartition::all_included(data.n_vars()));
  if (part.n_vars() != data.n_vars())
    throw ValidationError("initial inclusion mask length does not match n_vars");
  double pi = priors.pi_mode.is_hyper()
                  ? priors.pi_mode.a0 / (priors.pi_mode.a0 + priors.pi_mode.b0)
                  : priors.pi_mode.pi;
  SuffStats stats(data, z, cfg.initial_g);
  return SamplerState{cfg.initial_g, std::move(z), std::move(part), pi,
                      std::move(stats)};
}

void gibbs_sweep_memberships(SamplerState& state, const CategoricalDataset& data,
                             const Priors& priors, Rng& rng) {
  const int g = state.g;
  if (g == 1) return;  // degenerate full conditional
  const int n = data.n_items();
  const double alpha = priors.alpha;
  const double beta = priors.beta;

  SweepScratch s;
  s.build(state, data, priors);
  const int n_incl = static_cast<int>(s.incl_offset.size());
  SuffStats& stats = state.stats;

  for (int item = 0; item < n; ++item) {
    const int h0 = state.z[item];
    stats.remove_item(item, h0);
    s.refresh_row(state, h0);

    auto cells = data.row(item);
    double total = 0.0;
    for (int h = 0; h < g; ++h) {
      double w = stats.group_size(h) + alpha;
      const int32_t* row = stats.group_row(h).data();
      const double* inv = &s.inv_den[static_cast<size_t>(h) * s.n_classes];
      for (int i = 0; i < n_incl; ++i) {
        w *= (row[s.incl_offset[i] + cells[s.incl_var[i]] - 1] + beta) *
             inv[s.incl_class[i]];
      }
      s.weights[h] = w;
      total += w;
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
      // Log-domain fallback for pathologically small products.
      for (int h = 0; h < g; ++h) {
        double nh = stats.group_size(h);
        double lw = std::log(nh + alpha);
        for (int i = 0; i < n_incl; ++i) {
          lw += std::log(
              stats.group_row(h)[s.incl_offset[i] + cells[s.incl_var[i]] - 1] +
              beta);
          lw -= std::log(nh + s.class_cb[s.incl_class[i]]);
        }
        s.logw[h] = lw;
      }
      double mx = *std::max_element(s.logw.begin(), s.logw.end());
      total = 0.0;
      for (int h = 0; h < g; ++h) {
        s.weights[h] = std::exp(s.logw[h] - mx);
        total += s.weights[h];
      }
    }

    int h1 = rng.categorical(s.weights, total);
    stats.add_item(item, h1);
    s.refresh_row(state, h1);
    state.z[item] = h1;
  }
}

double log_eject_accept(const SamplerState& state, const Priors& priors,
                        const MoveParams& mp, int k, const SuffStats& candidate) {
  const int g = state.g;
  const double alpha = priors.alpha;
  const double a = mp.eject_shape_a;
  const int n = state.stats.n_items();
  const int fresh = candidate.n_groups() - 1;

  double v = posterior::log_prior_g(g + 1, priors) -
             posterior::log_prior_g(g, priors);
  v += log_gamma((g + 1) * alpha) - log_gamma(g * alpha) - log_gamma(alpha);
  v += log_gamma(n + g * alpha) - log_gamma(n + (g + 1) * alpha);
  v += posterior::log_group_block(candidate, k, state.part, priors);
  v += posterior::log_group_block(candidate, fresh, state.part, priors);
  v -= posterior::log_group_block(state.stats, k, state.part, priors);

  double p_fwd = eject_probability(g, mp, priors.g_max);
  double p_rev = eject_probability(g + 1, mp, priors.g_max);
  v += std::log(1.0 - p_rev) - std::log(p_fwd);

  double nk = state.stats.group_size(k);
  double nk_left = candidate.group_size(k);
  double nk_new = candidate.group_size(fresh);
  v += 2.0 * log_gamma(a) - log_gamma(2.0 * a);
  v += log_gamma(2.0 * a + nk) - log_gamma(a + nk_left) - log_gamma(a + nk_new);
  return v;
}

double log_absorb_accept(const SamplerState& state, const Priors& priors,
                         const MoveParams& mp, int k, int k2) {
  const int g = state.g;
  const double alpha = priors.alpha;
  const double a = mp.eject_shape_a;
  const int n = state.stats.n_items();

  SuffStats merged = state.stats;
  merged.merge_groups(k, k2);

  double v = posterior::log_prior_g(g - 1, priors) -
             posterior::log_prior_g(g, priors);
  v += log_gamma((g - 1) * alpha) - log_gamma(g * alpha) + log_gamma(alpha);
  v += log_gamma(n + g * alpha) - log_gamma(n + (g - 1) * alpha);
  v += posterior::log_group_block(merged, k2, state.part, priors);
  v -= posterior::log_group_block(state.stats, k, state.part, priors);
  v -= posterior::log_group_block(state.stats, k2, state.part, priors);

  // Reverse move is an eject from the merged component.
  double p_fwd_eject = eject_probability(g - 1, mp, priors.g_max);
  double p_rev_absorb = 1.0 - eject_probability(g, mp, priors.g_max);
  v -= std::log(p_rev_absorb) - std::log(p_fwd_eject);

  double nk = state.stats.group_size(k);
  double nk2 = state.stats.group_size(k2);
  v -= 2.0 * log_gamma(a) - log_gamma(2.0 * a);
  v -= log_gamma(2.0 * a + nk + nk2) - log_gamma(a + nk) - log_gamma(a + nk2);
  return v;
}

MoveOutcome eject_or_absorb(SamplerState& state, const CategoricalDataset& data,
                            const Priors& priors, const MoveParams& mp,
                            Rng& rng) {
  (void)data;
  if (priors.g_max == 1) return {};
  const int g = state.g;
  const int n = state.stats.n_items();
  double p_eject = eject_probability(g, mp, priors.g_max);

  if (rng.uniform() < p_eject) {
    int k = static_cast<int>(rng.uniform_below(g));
    double u = rng.beta(mp.eject_shape_a, mp.eject_shape_a);
    std::vector<int> moved;
    for (int item = 0; item < n; ++item)
      if (state.z[item] == k && rng.uniform() < u) moved.push_back(item);

    SuffStats candidate = state.stats.split_counts(moved, k);
    double log_a = log_eject_accept(state, priors, mp, k, candidate);
    bool accepted = std::log(rng.uniform()) < log_a;
    if (accepted) {
      state.stats = std::move(candidate);
      for (int item : moved) state.z[item] = g;
      state.g = g + 1;
      // Label swap with a uniformly chosen component, to help mixing.
      int partner = static_cast<int>(rng.uniform_below(g + 1));
      if (partner != g) {
        state.stats.swap_groups(partner, g);
        for (auto& zi : state.z) {
          if (zi == g)
            zi = partner;
          else if (zi == partner)
            zi = g;
        }
      }
    }
    return {MoveType::kEject, accepted, log_a};
  }

  // Absorb: p_eject < 1 implies g >= 2 here.
  int k = static_cast<int>(rng.uniform_below(g));
  int k2 = static_cast<int>(rng.uniform_below(g - 1));
  if (k2 >= k) ++k2;
  double log_a = log_absorb_accept(state, priors, mp, k, k2);
  bool accepted = std::log(rng.uniform()) < log_a;
  if (accepted) {
    state.stats.merge_groups(k, k2);
    int last = g - 1;
    for (auto& zi : state.z) {
      if (zi == k) zi = k2;
    }
    if (k != last) {
      state.stats.swap_groups(k, last);
      for (auto& zi : state.z)
        if (zi == last) zi = k;
    }
    state.stats.pop_last_group();
    state.g = g - 1;
  }
  return {MoveType::kAbsorb, accepted, log_a};
}

MoveOutcome variable_move(SamplerState& state, const CategoricalDataset& data,
                          const Priors& priors, Rng& rng) {
  int j = static_cast<int>(rng.uniform_below(data.n_vars()));
  double log_r = posterior::log_variable_move_ratio(state.stats, state.part,
                                                    state.g, priors, state.pi, j);
  bool including = !state.part.included[j];
  bool accepted = std::log(rng.uniform()) < log_r;
  if (accepted) state.part.included[j] ^= 1;
  return {including ? MoveType::kInclude : MoveType::kExclude, accepted, log_r};
}

void update_pi(SamplerState& state, const Priors& priors, Rng& rng) {
  if (!priors.pi_mode.is_hyper())
    throw ValidationError("pi_mode: update_pi requires the Beta hyperprior");
  int k = state.part.n_included();
  int m = state.part.n_vars();
  state.pi = rng.beta(k + priors.pi_mode.a0, (m - k) + priors.pi_mode.b0);
}

Trace run(const CategoricalDataset& data, const Priors& priors,
          const RunConfig& cfg, const MoveParams& mp,
          const SamplerOptions& opts) {
  if (opts.snapshots && (opts.g_moves || opts.var_moves))
    throw ValidationError("snapshots require a frozen (G, nu) run");
  Rng rng(cfg.seed, opts.rng_stream);
  SamplerState st = init_state(data, priors, cfg, opts, rng);

  Trace tr;
  tr.n_vars = data.n_vars();
  tr.has_z = cfg.store_z;
  tr.n_items = data.n_items();
  if (opts.snapshots) {
    tr.has_snapshots = true;
    tr.snap_g = st.g;
    tr.snap_vars = st.part.indices();
    int off = 0;
    for (int m : tr.snap_vars) {
      tr.snap_offsets.push_back(off);
      tr.snap_cats.push_back(data.n_categories(m));
      off += data.n_categories(m);
    }
    tr.snap_stride = off;
  }

  const int64_t total = cfg.burn_in + cfg.iterations;
  for (int64_t sweep = 1; sweep <= total; ++sweep) {
    gibbs_sweep_memberships(st, data, priors, rng);
    if (opts.g_moves) {
      auto mo = eject_or_absorb(st, data, priors, mp, rng);
      if (mo.type == MoveType::kEject) {
        ++tr.accepts.eject_proposed;
        tr.accepts.eject_accepted += mo.accepted;
      } else if (mo.type == MoveType::kAbsorb) {
        ++tr.accepts.absorb_proposed;
        tr.accepts.absorb_accepted += mo.accepted;
      }
    }
    if (opts.var_moves) {
      auto mo = variable_move(st, data, priors, rng);
      if (mo.type == MoveType::kInclude) {
        ++tr.accepts.include_proposed;
        tr.accepts.include_accepted += mo.accepted;
      } else {
        ++tr.accepts.exclude_proposed;
        tr.accepts.exclude_accepted += mo.accepted;
      }
    }
    if (priors.pi_mode.is_hyper()) update_pi(st, priors, rng);

    if (sweep % 1000 == 0) st.stats.check_consistent(st.z);

    if (sweep > cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == 0) {
      double lp = posterior::log_collapsed_posterior(st.stats, st.part, st.g,
                                                     priors, st.pi);
      tr.records.push_back(
          {sweep, lp, st.g, st.part.n_included(), st.pi});
      tr.masks.insert(tr.masks.end(), st.part.included.begin(),
                      st.part.included.end());
      if (tr.has_z)
        for (int zi : st.z) tr.z.push_back(static_cast<uint16_t>(zi));
      if (tr.has_snapshots) {
        for (int h = 0; h < tr.snap_g; ++h)
          tr.snap_sizes.push_back(st.stats.group_size(h));
        for (int h = 0; h < tr.snap_g; ++h)
          for (size_t vi = 0; vi < tr.snap_vars.size(); ++vi) {
            int m = tr.snap_vars[vi];
            for (int c = 1; c <= data.n_categories(m); ++c)
              tr.snap_counts.push_back(st.stats.count(h, m, c));
          }
      }
    }
  }
  return tr;
}

}  // namespace lcavs::sampler
