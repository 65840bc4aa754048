#include "lcavs/rjmcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lcavs/common.hpp"
#include "lcavs/relabel.hpp"

namespace lcavs::rjmcmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_binary(const CategoricalDataset& data) {
  for (int m = 0; m < data.n_vars(); ++m)
    if (data.n_categories(m) != 2)
      throw ValidationError(
          "the full-parameter baseline handles binary data only; variable " +
          std::to_string(m + 1) + " has " +
          std::to_string(data.n_categories(m)) + " categories");
}

inline double logit(double p) { return std::log(p) - std::log1p(-p); }
inline double expit(double x) {
  if (x >= 0) {
    double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

struct Tallies {
  std::vector<int> n_g;   // group sizes
  std::vector<int> s_gm;  // count of code 1 per (group, variable)

  Tallies(const FullParamState& state, const CategoricalDataset& data) {
    const int g = state.g, m_vars = data.n_vars();
    n_g.assign(g, 0);
    s_gm.assign(static_cast<size_t>(g) * m_vars, 0);
    for (int n = 0; n < data.n_items(); ++n) {
      int h = state.z[n];
      ++n_g[h];
      auto row = data.row(n);
      for (int m = 0; m < m_vars; ++m)
        if (row[m] == 1) ++s_gm[static_cast<size_t>(h) * m_vars + m];
    }
  }
  int s(int h, int m, int m_vars) const {
    return s_gm[static_cast<size_t>(h) * m_vars + m];
  }
};

// log acceptance ratio for including variable j with proposed per-group
// probabilities theta_star, starting from one-class probability rho. The
// exclusion ratio at the paired state is its negation.
double log_inclusion_ratio(const FullParamState& state,
                           const CategoricalDataset& data, const Priors& priors,
                           const Tallies& tally, int j,
                           std::span<const double> theta_star, double rho) {
  const int g = state.g;
  const int m_vars = data.n_vars();
  const int n = data.n_items();
  const double beta = priors.beta;
  const double pi = priors.pi_mode.pi;

  int nj1 = 0;
  for (int h = 0; h < g; ++h) nj1 += tally.s(h, j, m_vars);

  double lr = 0.0;
  for (int h = 0; h < g; ++h) {
    int s = tally.s(h, j, m_vars);
    lr += s * std::log(theta_star[h]) +
          (tally.n_g[h] - s) * std::log1p(-theta_star[h]);
  }
  lr -= nj1 * std::log(rho) + (n - nj1) * std::log1p(-rho);

  // Beta(beta, beta) prior ratio: G new theta densities over one rho density.
  double log_theta_d = 0.0;
  for (int h = 0; h < g; ++h)
    log_theta_d += std::log(theta_star[h]) + std::log1p(-theta_star[h]);
  double prior = (g - 1) * (log_gamma(2.0 * beta) - 2.0 * log_gamma(beta)) +
                 (beta - 1.0) *
                     (log_theta_d - std::log(rho) - std::log1p(-rho));

  double pi_odds = std::log(pi) - std::log1p(-pi);
  double density = (g - 1) * std::log(2.0 * state.epsilon);
  double jac = log_jacobian(theta_star, rho);
  return lr + prior + pi_odds + density + jac;
}

}  // namespace

void inclusion_map(double rho, std::span<const double> u,
                   std::span<double> theta_out) {
  const int g = static_cast<int>(theta_out.size());
  if (static_cast<int>(u.size()) != g - 1)
    throw ValidationError("u must have G-1 entries");
  double base = logit(rho);
  double sum = 0.0;
  for (int h = 0; h < g - 1; ++h) {
    theta_out[h] = expit(base + u[h]);
    sum += u[h];
  }
  theta_out[g - 1] = expit(base - sum);
}

void exclusion_map(std::span<const double> theta, double& rho_out,
                   std::span<double> u_out) {
  const int g = static_cast<int>(theta.size());
  if (static_cast<int>(u_out.size()) != g - 1)
    throw ValidationError("u must have G-1 entries");
  double mean_logit = 0.0;
  for (double th : theta) mean_logit += logit(th);
  mean_logit /= g;
  rho_out = expit(mean_logit);
  for (int h = 0; h < g - 1; ++h) u_out[h] = logit(theta[h]) - mean_logit;
}

double log_jacobian(std::span<const double> theta, double rho) {
  double v = std::log(static_cast<double>(theta.size()));
  for (double th : theta) v += std::log(th) + std::log1p(-th);
  return v - std::log(rho) - std::log1p(-rho);
}

std::vector<double> jacobian_matrix(std::span<const double> theta, double rho) {
  const int g = static_cast<int>(theta.size());
  std::vector<double> jac(static_cast<size_t>(g) * g, 0.0);
  double r = rho * (1.0 - rho);
  auto d = [&](int h) { return theta[h] * (1.0 - theta[h]); };
  for (int col = 0; col < g; ++col) jac[col] = d(col) / r;  // d theta / d rho
  for (int row = 1; row < g; ++row) {
    jac[static_cast<size_t>(row) * g + (row - 1)] = d(row - 1);
    jac[static_cast<size_t>(row) * g + (g - 1)] = -d(g - 1);
  }
  return jac;
}

void full_gibbs_sweep(FullParamState& state, const CategoricalDataset& data,
                      const Priors& priors, Rng& rng) {
  require_binary(data);
  const int g = state.g;
  const int m_vars = data.n_vars();
  const int n = data.n_items();
  const double alpha = priors.alpha;
  const double beta = priors.beta;

  Tallies tally(state, data);

  for (int h = 0; h < g; ++h)
    for (int m = 0; m < m_vars; ++m)
      if (state.part.included[m]) {
        int s = tally.s(h, m, m_vars);
        state.theta_at(h, m) =
            rng.beta(s + beta, tally.n_g[h] - s + beta);
      }
  for (int m = 0; m < m_vars; ++m)
    if (!state.part.included[m]) {
      int nm1 = 0;
      for (int h = 0; h < g; ++h) nm1 += tally.s(h, m, m_vars);
      state.rho[m] = rng.beta(nm1 + beta, n - nm1 + beta);
    }

  std::vector<double> conc(g);
  for (int h = 0; h < g; ++h) conc[h] = tally.n_g[h] + alpha;
  rng.dirichlet(conc, state.tau);

  // Membership refresh from the full conditional.
  std::vector<double> log_tau(g), log_th(static_cast<size_t>(g) * m_vars),
      log_1mth(static_cast<size_t>(g) * m_vars), w(g);
  for (int h = 0; h < g; ++h) log_tau[h] = std::log(state.tau[h]);
  for (int h = 0; h < g; ++h)
    for (int m = 0; m < m_vars; ++m)
      if (state.part.included[m]) {
        log_th[static_cast<size_t>(h) * m_vars + m] =
            std::log(state.theta_at(h, m));
        log_1mth[static_cast<size_t>(h) * m_vars + m] =
            std::log1p(-state.theta_at(h, m));
      }
  for (int item = 0; item < n; ++item) {
    auto row = data.row(item);
    double mx = kNegInf;
    for (int h = 0; h < g; ++h) {
      double lw = log_tau[h];
      for (int m = 0; m < m_vars; ++m) {
        if (!state.part.included[m]) continue;
        lw += (row[m] == 1) ? log_th[static_cast<size_t>(h) * m_vars + m]
                            : log_1mth[static_cast<size_t>(h) * m_vars + m];
      }
      w[h] = lw;
      mx = std::max(mx, lw);
    }
    double total = 0.0;
    for (int h = 0; h < g; ++h) {
      w[h] = std::exp(w[h] - mx);
      total += w[h];
    }
    state.z[item] = rng.categorical(w, total);
  }
}

RjOutcome rj_inclusion(FullParamState& state, const CategoricalDataset& data,
                       const Priors& priors, Rng& rng, int j) {
  if (state.part.included[j])
    throw ValidationError("rj_inclusion: variable already included");
  const int g = state.g;
  Tallies tally(state, data);

  std::vector<double> u(g - 1);
  for (auto& ui : u) ui = (2.0 * rng.uniform() - 1.0) * state.epsilon;
  std::vector<double> theta_star(g);
  inclusion_map(state.rho[j], u, theta_star);

  double log_a =
      log_inclusion_ratio(state, data, priors, tally, j, theta_star, state.rho[j]);
  bool accepted = std::log(rng.uniform()) < log_a;
  if (accepted) {
    state.part.included[j] = 1;
    for (int h = 0; h < g; ++h) state.theta_at(h, j) = theta_star[h];
  }
  return {accepted, log_a};
}

RjOutcome rj_exclusion(FullParamState& state, const CategoricalDataset& data,
                       const Priors& priors, Rng& rng, int j) {
  if (!state.part.included[j])
    throw ValidationError("rj_exclusion: variable already excluded");
  const int g = state.g;
  Tallies tally(state, data);

  std::vector<double> theta(g);
  for (int h = 0; h < g; ++h) theta[h] = state.theta_at(h, j);
  double rho = 0.0;
  std::vector<double> u(g - 1);
  exclusion_map(theta, rho, u);

  // The reverse inclusion draws each u_i from (-eps, eps); outside that
  // window the move has no reverse path and must be rejected.
  for (double ui : u)
    if (!(std::abs(ui) < state.epsilon)) {
      return {false, kNegInf};
    }

  double log_a =
      -log_inclusion_ratio(state, data, priors, tally, j, theta, rho);
  bool accepted = std::log(rng.uniform()) < log_a;
  if (accepted) {
    state.part.included[j] = 0;
    state.rho[j] = rho;
  }
  return {accepted, log_a};
}

namespace {

double log_joint(const FullParamState& state, const CategoricalDataset& data,
                 const Priors& priors) {
  const int g = state.g;
  const int m_vars = data.n_vars();
  const int n = data.n_items();
  const double alpha = priors.alpha;
  const double beta = priors.beta;
  const double pi = priors.pi_mode.pi;
  Tallies tally(state, data);

  double v = 0.0;
  for (int h = 0; h < g; ++h) {
    v += tally.n_g[h] * std::log(state.tau[h]);
    for (int m = 0; m < m_vars; ++m) {
      if (!state.part.included[m]) continue;
      int s = tally.s(h, m, m_vars);
      v += s * std::log(state.theta_at(h, m)) +
           (tally.n_g[h] - s) * std::log1p(-state.theta_at(h, m));
    }
  }
  for (int m = 0; m < m_vars; ++m) {
    if (state.part.included[m]) continue;
    int nm1 = 0;
    for (int h = 0; h < g; ++h) nm1 += tally.s(h, m, m_vars);
    v += nm1 * std::log(state.rho[m]) + (n - nm1) * std::log1p(-state.rho[m]);
  }
  // Priors on tau, theta, rho and the partition.
  v += log_gamma(g * alpha) - g * log_gamma(alpha);
  for (int h = 0; h < g; ++h) v += (alpha - 1.0) * std::log(state.tau[h]);
  double log_beta_const = log_gamma(2.0 * beta) - 2.0 * log_gamma(beta);
  for (int m = 0; m < m_vars; ++m) {
    if (state.part.included[m]) {
      for (int h = 0; h < g; ++h)
        v += log_beta_const + (beta - 1.0) * (std::log(state.theta_at(h, m)) +
                                              std::log1p(-state.theta_at(h, m)));
      v += std::log(pi);
    } else {
      v += log_beta_const + (beta - 1.0) * (std::log(state.rho[m]) +
                                            std::log1p(-state.rho[m]));
      v += std::log1p(-pi);
    }
  }
  return v;
}

}  // namespace

Result run_fixed_g(const CategoricalDataset& data, const Priors& priors,
                   const RunConfig& cfg, int g, double epsilon,
                   const RunOptions& opts) {
  require_binary(data);
  if (priors.pi_mode.is_hyper())
    throw ValidationError("the full-parameter baseline uses fixed pi only");
  if (g < 1 || g > priors.g_max)
    throw ValidationError("g: outside 1..g_max");
  const int m_vars = data.n_vars();
  const int n = data.n_items();

  Rng rng(cfg.seed, opts.rng_stream);
  FullParamState state;
  state.g = g;
  state.epsilon = epsilon;
  state.part =
      opts.initial_mask.value_or(InclusionPartition::all_included(m_vars));
  state.theta.assign(static_cast<size_t>(g) * m_vars, 0.5);
  state.rho.assign(m_vars, 0.5);
  state.tau.assign(g, 1.0 / g);
  state.z.resize(n);
  for (int i = 0; i < n; ++i)
    state.z[i] = static_cast<int>(rng.uniform_below(g));

  Result res;
  res.trace.n_vars = m_vars;
  res.trace.n_items = n;

  relabel::RunningCounts rc(n, g);
  std::vector<int64_t> incl_counts(m_vars, 0);
  // Conditional-on-inclusion accumulators per (group, variable).
  std::vector<double> th_sum(static_cast<size_t>(g) * m_vars, 0.0);
  std::vector<double> th_sum2(static_cast<size_t>(g) * m_vars, 0.0);
  std::vector<double> tau_sum(g, 0.0), tau_sum2(g, 0.0);
  std::vector<int> z_relab(n);

  const int64_t total = cfg.burn_in + cfg.iterations;
  for (int64_t sweep = 1; sweep <= total; ++sweep) {
    full_gibbs_sweep(state, data, priors, rng);
    if (opts.rj_moves) {
      int j = static_cast<int>(rng.uniform_below(m_vars));
      bool excluding = state.part.included[j];
      RjOutcome out = excluding ? rj_exclusion(state, data, priors, rng, j)
                                : rj_inclusion(state, data, priors, rng, j);
      ++res.rj_proposed;
      res.rj_accepted += out.accepted;
      if (excluding) {
        ++res.trace.accepts.exclude_proposed;
        res.trace.accepts.exclude_accepted += out.accepted;
      } else {
        ++res.trace.accepts.include_proposed;
        res.trace.accepts.include_accepted += out.accepted;
      }
    }

    if (sweep > cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == 0) {
      res.trace.records.push_back({sweep, log_joint(state, data, priors), g,
                                   state.part.n_included(),
                                   priors.pi_mode.pi});
      res.trace.masks.insert(res.trace.masks.end(), state.part.included.begin(),
                             state.part.included.end());

      // Undo label switching against the running counts, then accumulate.
      std::copy(state.z.begin(), state.z.end(), z_relab.begin());
      auto cost = relabel::build_cost<int>(rc, z_relab);
      auto sigma = relabel::solve_assignment(cost, g);
      relabel::apply_assignment<int>(sigma, z_relab);
      rc.incorporate<int>(z_relab);
      std::vector<int> inverse(g);
      for (int row = 0; row < g; ++row) inverse[sigma[row]] = row;

      for (int m = 0; m < m_vars; ++m) {
        if (!state.part.included[m]) continue;
        ++incl_counts[m];
        for (int old_row = 0; old_row < g; ++old_row) {
          double th = state.theta_at(old_row, m);
          size_t idx = static_cast<size_t>(inverse[old_row]) * m_vars + m;
          th_sum[idx] += th;
          th_sum2[idx] += th * th;
        }
      }
      for (int old_row = 0; old_row < g; ++old_row) {
        double tv = state.tau[old_row];
        tau_sum[inverse[old_row]] += tv;
        tau_sum2[inverse[old_row]] += tv * tv;
      }
    }
  }

  const int64_t t_total = static_cast<int64_t>(res.trace.size());
  if (t_total > 0) {
    res.inclusion_prob.resize(m_vars);
    for (int m = 0; m < m_vars; ++m)
      res.inclusion_prob[m] =
          static_cast<double>(incl_counts[m]) / static_cast<double>(t_total);

    auto& est = res.estimates;
    est.g = g;
    for (int m = 0; m < m_vars; ++m) est.variables.push_back(m);
    est.categories.assign(m_vars, 2);
    est.offsets.resize(m_vars);
    for (int m = 0; m < m_vars; ++m) est.offsets[m] = 2 * m;
    est.stride = 2 * m_vars;
    est.theta_mean.assign(static_cast<size_t>(g) * est.stride, 0.0);
    est.theta_sd.assign(static_cast<size_t>(g) * est.stride, 0.0);
    const double prior_mean = 0.5;
    const double prior_sd =
        std::sqrt(priors.beta * priors.beta /
                  ((2 * priors.beta) * (2 * priors.beta) * (2 * priors.beta + 1)));
    for (int m = 0; m < m_vars; ++m) {
      for (int h = 0; h < g; ++h) {
        double mean, sd;
        if (incl_counts[m] > 0) {
          double c = static_cast<double>(incl_counts[m]);
          mean = th_sum[static_cast<size_t>(h) * m_vars + m] / c;
          double var =
              th_sum2[static_cast<size_t>(h) * m_vars + m] / c - mean * mean;
          sd = std::sqrt(std::max(0.0, var));
        } else {
          // Never included over the retained sweeps: report the prior.
          mean = prior_mean;
          sd = prior_sd;
        }
        size_t base = static_cast<size_t>(h) * est.stride + 2 * m;
        est.theta_mean[base] = mean;
        est.theta_mean[base + 1] = 1.0 - mean;
        est.theta_sd[base] = sd;
        est.theta_sd[base + 1] = sd;
      }
    }
    est.tau_mean.resize(g);
    est.tau_sd.resize(g);
    for (int h = 0; h < g; ++h) {
      double mean = tau_sum[h] / static_cast<double>(t_total);
      double var = tau_sum2[h] / static_cast<double>(t_total) - mean * mean;
      est.tau_mean[h] = mean;
      est.tau_sd[h] = std::sqrt(std::max(0.0, var));
    }

    res.clustering.assignment.resize(n);
    res.clustering.probability.resize(n);
    for (int i = 0; i < n; ++i) {
      int best = 0;
      for (int h = 1; h < g; ++h)
        if (rc.r(i, h) > rc.r(i, best)) best = h;
      res.clustering.assignment[i] = best;
      res.clustering.probability[i] =
          rc.r(i, best) / static_cast<double>(rc.t_seen());
    }
  }
  return res;
}

}  // namespace lcavs::rjmcmc
