#pragma once

#include <vector>

#include "lcavs/sampler.hpp"

namespace lcavs::posthoc {

/**
 * Posterior moments of the integrated-out parameters, recovered from a
 * relabeled fixed-(G, nu) auxiliary trace by the laws of total expectation
 * and variance over the retained count snapshots. theta rows are indexed by
 * the trace's snapshot variables; per (g, m) the means sum to 1 exactly up
 * to rounding.
 */
struct ParameterEstimates {
  int g = 0;
  std::vector<int> variables;  // 0-based source-variable indices
  std::vector<int> categories; // C_m per listed variable
  std::vector<int> offsets;
  int stride = 0;
  std::vector<double> theta_mean;  // g x stride
  std::vector<double> theta_sd;
  std::vector<double> tau_mean;  // g
  std::vector<double> tau_sd;

  double theta(int group, int vi, int c) const {
    return theta_mean[static_cast<size_t>(group) * stride + offsets[vi] + c - 1];
  }
  double theta_stddev(int group, int vi, int c) const {
    return theta_sd[static_cast<size_t>(group) * stride + offsets[vi] + c - 1];
  }
};

ParameterEstimates estimate(const Trace& relabeled, const Priors& priors);

struct ModalClustering {
  std::vector<int> assignment;     // 0-based modal group per item
  std::vector<double> probability; // posterior probability of that group
};

// Item n goes to the group it occupied most often across the relabeled
// trace; ties break toward the smallest group index.
ModalClustering modal_clustering(const Trace& relabeled);

}  // namespace lcavs::posthoc
