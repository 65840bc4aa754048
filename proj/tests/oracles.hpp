#pragma once

// Independent reference computations used only by tests: quadrature for the
// marginalized data factor, brute-force assignment search, naive cost
// matrices, finite-difference Jacobians, and exhaustive posterior
// enumeration on tiny instances. Nothing here shares code with the
// implementation paths it checks.

#include <functional>
#include <span>
#include <vector>

#include "lcavs/dataset.hpp"
#include "lcavs/posterior.hpp"
#include "lcavs/suffstats.hpp"

namespace oracles {

// Nodes/weights of an n-point Gauss-Legendre rule on [a, b].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  Quadrature(int n, double a, double b);

  double integrate(const std::function<double(double)>& f) const {
    double s = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// log integral of x^(a-1) (1-x)^(b-1) / B(w1, w2) over (0, 1), computed by
// Gauss-Legendre after the x = sin^2 t substitution (a, b >= 1/2). Used to
// rebuild Dirichlet-multinomial factors without lgamma identities.
double log_beta_integral(double a, double b, double w1, double w2);

// log of the marginalized data factor for binary data and G <= 2, assembled
// from numerical integrals over theta, rho and tau.
double log_data_factor_quadrature(const lcavs::SuffStats& stats,
                                  const lcavs::InclusionPartition& part,
                                  const lcavs::Priors& priors);

// Minimum-cost permutation by exhaustive search; identity-biased ties.
std::vector<int> brute_force_assignment(std::span<const int64_t> cost, int g);

// The O(T N) double-sum form of the relabeling cost matrix.
std::vector<int64_t> naive_cost(const std::vector<std::vector<int>>& history,
                                std::span<const int> z_new, int g);

// Determinant by Gaussian elimination with partial pivoting.
double determinant(std::vector<double> a, int n);

// Full collapsed posterior re-evaluated from scratch on a rebuilt count
// table for membership z (0-based) with g groups.
double full_eval(const lcavs::CategoricalDataset& data, std::span<const int> z,
                 int g, const lcavs::InclusionPartition& part,
                 const lcavs::Priors& priors, double pi);

// Exact posterior over (G, Z, mask) on a tiny dataset: marginal
// probabilities of G = k and of each variable's inclusion.
struct ExactMarginals {
  std::vector<double> p_g;         // index 0 = one group
  std::vector<double> p_included;  // per variable
};
ExactMarginals enumerate_posterior(const lcavs::CategoricalDataset& data,
                                   const lcavs::Priors& priors);

// Same enumeration at fixed G (mask marginals only), the target of the
// full-parameter baseline's variable moves.
std::vector<double> enumerate_mask_posterior_fixed_g(
    const lcavs::CategoricalDataset& data, const lcavs::Priors& priors, int g);

// Least-squares R^2 of y against x.
double r_squared(std::span<const double> x, std::span<const double> y);

}  // namespace oracles
