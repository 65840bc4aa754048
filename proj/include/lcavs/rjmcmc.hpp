#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lcavs/posthoc.hpp"
#include "lcavs/rng.hpp"
#include "lcavs/sampler.hpp"

namespace lcavs::rjmcmc {

/**
 * Full-parameter state for binary data at fixed G: per-group success
 * probabilities theta (P(code 1)) for clustering variables, one-class
 * probabilities rho for the rest, mixture weights tau, memberships z, the
 * inclusion partition, and the reversible-jump window epsilon.
 */
struct FullParamState {
  int g = 0;
  std::vector<double> theta;  // g x M, meaningful where included
  std::vector<double> rho;    // M, meaningful where excluded
  std::vector<double> tau;    // g
  std::vector<int> z;         // 0-based labels
  InclusionPartition part;
  double epsilon = 1.0;

  double& theta_at(int group, int m) {
    return theta[static_cast<size_t>(group) * part.n_vars() + m];
  }
  double theta_at(int group, int m) const {
    return theta[static_cast<size_t>(group) * part.n_vars() + m];
  }
};

// theta_g = expit(logit(rho) + u_g) with u_G = -sum(u); u has G-1 entries.
void inclusion_map(double rho, std::span<const double> u,
                   std::span<double> theta_out);

// Inverse of the above: rho from the symmetrized geometric means, u_g the
// centered logits (first G-1 entries of a zero-sum vector).
void exclusion_map(std::span<const double> theta, double& rho_out,
                   std::span<double> u_out);

// log |det J| of the inclusion map at (theta, rho):
// log G + sum_g log(theta_g (1-theta_g)) - log(rho (1-rho)).
double log_jacobian(std::span<const double> theta, double rho);

// Dense Jacobian in the row layout used by the finite-difference check:
// row 1 = d theta_g / d rho, row k = d theta_g / d u_{k-1}.
std::vector<double> jacobian_matrix(std::span<const double> theta, double rho);

// Conjugate refresh of theta, rho, tau and z; binary data only.
void full_gibbs_sweep(FullParamState& state, const CategoricalDataset& data,
                      const Priors& priors, Rng& rng);

struct RjOutcome {
  bool accepted = false;
  double log_accept = 0.0;
};

RjOutcome rj_inclusion(FullParamState& state, const CategoricalDataset& data,
                       const Priors& priors, Rng& rng, int j);

RjOutcome rj_exclusion(FullParamState& state, const CategoricalDataset& data,
                       const Priors& priors, Rng& rng, int j);

struct RunOptions {
  bool rj_moves = true;
  std::optional<InclusionPartition> initial_mask;  // default: all included
  uint64_t rng_stream = 0;
};

struct Result {
  Trace trace;  // records + masks; z not stored (estimates are built online)
  posthoc::ParameterEstimates estimates;  // label-switching corrected
  posthoc::ModalClustering clustering;
  std::vector<double> inclusion_prob;
  int64_t rj_proposed = 0;
  int64_t rj_accepted = 0;
};

Result run_fixed_g(const CategoricalDataset& data, const Priors& priors,
                   const RunConfig& cfg, int g, double epsilon,
                   const RunOptions& opts = {});

}  // namespace lcavs::rjmcmc
