#include "lcavs/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lcavs/common.hpp"

namespace lcavs::posterior {

double log_prior_g(int g, const Priors& priors) {
  if (g < 1 || g > priors.g_max)
    throw ValidationError("g: value " + std::to_string(g) +
                          " outside 1..g_max");
  // p(k) proportional to rate^k / k! over 1..g_max; normalize in log space.
  double log_rate = std::log(priors.poisson_rate);
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(priors.g_max);
  for (int k = 1; k <= priors.g_max; ++k) {
    terms[k - 1] = k * log_rate - log_gamma(k + 1.0);
    max_term = std::max(max_term, terms[k - 1]);
  }
  double z = 0.0;
  for (double t : terms) z += std::exp(t - max_term);
  return terms[g - 1] - max_term - std::log(z);
}

double log_inclusion_prior(const InclusionPartition& part, double pi) {
  int k = part.n_included();
  return k * std::log(pi) + (part.n_vars() - k) * std::log1p(-pi);
}

double log_pi_hyperprior(double pi, const Priors& priors) {
  return (priors.pi_mode.a0 - 1.0) * std::log(pi) +
         (priors.pi_mode.b0 - 1.0) * std::log1p(-pi) -
         log_beta(priors.pi_mode.a0, priors.pi_mode.b0);
}

double log_group_block(const SuffStats& stats, int g_row,
                       const InclusionPartition& part, const Priors& priors) {
  const double beta = priors.beta;
  const auto& data = stats.data();
  double v = log_gamma(stats.group_size(g_row) + priors.alpha);
  for (int m = 0; m < data.n_vars(); ++m) {
    if (!part.included[m]) continue;
    int cm = data.n_categories(m);
    v += log_gamma(cm * beta) - cm * log_gamma(beta);
    for (int c = 1; c <= cm; ++c) v += log_gamma(stats.count(g_row, m, c) + beta);
    v -= log_gamma(stats.group_size(g_row) + cm * beta);
  }
  return v;
}

double log_marginal_data(const SuffStats& stats, const InclusionPartition& part,
                         const Priors& priors) {
  const double alpha = priors.alpha;
  const double beta = priors.beta;
  const auto& data = stats.data();
  const int g = stats.n_groups();
  const double n = static_cast<double>(stats.total_items());

  double v = log_gamma(g * alpha) - g * log_gamma(alpha) - log_gamma(n + g * alpha);
  for (int h = 0; h < g; ++h) v += log_group_block(stats, h, part, priors);

  for (int m = 0; m < data.n_vars(); ++m) {
    if (part.included[m]) continue;
    int cm = data.n_categories(m);
    v += log_gamma(cm * beta) - cm * log_gamma(beta);
    for (int c = 1; c <= cm; ++c) v += log_gamma(stats.marginal(m, c) + beta);
    v -= log_gamma(n + cm * beta);
  }
  return v;
}

double log_collapsed_posterior(const SuffStats& stats,
                               const InclusionPartition& part, int g,
                               const Priors& priors, double pi) {
  if (stats.n_groups() != g)
    throw ValidationError("stats are inconsistent with the stated G");
  double v = log_prior_g(g, priors) + log_inclusion_prior(part, pi) +
             log_marginal_data(stats, part, priors);
  if (priors.pi_mode.is_hyper()) v += log_pi_hyperprior(pi, priors);
  return v;
}

void gibbs_membership_logweights(const SuffStats& stats,
                                 const InclusionPartition& part,
                                 const Priors& priors, int n, int current,
                                 std::span<double> out) {
  const auto& data = stats.data();
  const int g = stats.n_groups();
  auto cells = data.row(n);
  for (int h = 0; h < g; ++h) {
    int self = (h == current) ? 1 : 0;
    double nh = stats.group_size(h) - self;
    double lw = std::log(nh + priors.alpha);
    for (int m = 0; m < data.n_vars(); ++m) {
      if (!part.included[m]) continue;
      double cnt = stats.count(h, m, cells[m]) - self;
      lw += std::log(cnt + priors.beta);
      lw -= std::log(nh + data.n_categories(m) * priors.beta);
    }
    out[h] = lw;
  }
}

void gibbs_membership_probs(const SuffStats& stats,
                            const InclusionPartition& part,
                            const Priors& priors, int n, int current,
                            std::span<double> out) {
  gibbs_membership_logweights(stats, part, priors, n, current, out);
  double mx = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (auto& w : out) {
    w = std::exp(w - mx);
    total += w;
  }
  for (auto& w : out) w /= total;
}

double log_variable_move_ratio(const SuffStats& stats,
                               const InclusionPartition& part, int g,
                               const Priors& priors, double pi, int j) {
  const double beta = priors.beta;
  const auto& data = stats.data();
  const int cj = data.n_categories(j);
  const double n = static_cast<double>(stats.total_items());

  // log R for moving j into the clustering set; counts do not depend on the
  // current partition, so the same expression serves both directions.
  double core = (g - 1) * (log_gamma(cj * beta) - cj * log_gamma(beta));
  for (int h = 0; h < g; ++h) {
    for (int c = 1; c <= cj; ++c) core += log_gamma(stats.count(h, j, c) + beta);
    core -= log_gamma(stats.group_size(h) + cj * beta);
  }
  for (int c = 1; c <= cj; ++c) core -= log_gamma(stats.marginal(j, c) + beta);
  core += log_gamma(n + cj * beta);
  core += std::log(pi) - std::log1p(-pi);

  return part.included[j] ? -core : core;
}

}  // namespace lcavs::posterior
