#include "lcavs/posthoc.hpp"

#include <cmath>

#include "lcavs/common.hpp"

namespace lcavs::posthoc {

ParameterEstimates estimate(const Trace& trace, const Priors& priors) {
  if (!trace.has_snapshots)
    throw ValidationError("estimation needs a frozen trace with snapshots");
  const size_t t_total = trace.size();
  if (t_total == 0) throw ValidationError("empty trace");

  const int g = trace.snap_g;
  const int stride = trace.snap_stride;
  const double alpha = priors.alpha;
  const double beta = priors.beta;
  const double t_inv = 1.0 / static_cast<double>(t_total);

  ParameterEstimates est;
  est.g = g;
  est.variables = trace.snap_vars;
  est.categories = trace.snap_cats;
  est.offsets = trace.snap_offsets;
  est.stride = stride;

  const size_t cells = static_cast<size_t>(g) * stride;
  std::vector<double> sum_e(cells, 0.0), sum_e2(cells, 0.0), sum_v(cells, 0.0);
  std::vector<double> tau_e(g, 0.0), tau_e2(g, 0.0), tau_v(g, 0.0);
  const double n = static_cast<double>(trace.n_items);

  for (size_t t = 0; t < t_total; ++t) {
    auto sizes = trace.sizes_at(t);
    for (int h = 0; h < g; ++h) {
      double ng = sizes[h];
      // tau moments conditional on this sweep's allocation
      double denom = n + g * alpha;
      double e = (ng + alpha) / denom;
      tau_e[h] += e;
      tau_e2[h] += e * e;
      tau_v[h] += (ng + alpha) * (n - ng + (g - 1) * alpha) /
                  (denom * denom * (denom + 1.0));
      // theta moments per variable/category
      for (size_t vi = 0; vi < est.variables.size(); ++vi) {
        int cm = est.categories[vi];
        double d = ng + cm * beta;
        for (int c = 1; c <= cm; ++c) {
          double s = trace.snap_count(t, h, static_cast<int>(vi), c);
          double ec = (s + beta) / d;
          size_t idx = static_cast<size_t>(h) * stride + est.offsets[vi] + c - 1;
          sum_e[idx] += ec;
          sum_e2[idx] += ec * ec;
          sum_v[idx] += (s + beta) * (ng + (cm - 1) * beta - s) / (d * d * (d + 1.0));
        }
      }
    }
  }

  est.theta_mean.resize(cells);
  est.theta_sd.resize(cells);
  for (size_t i = 0; i < cells; ++i) {
    double mean = sum_e[i] * t_inv;
    double var = sum_v[i] * t_inv + (sum_e2[i] * t_inv - mean * mean);
    est.theta_mean[i] = mean;
    est.theta_sd[i] = std::sqrt(std::max(0.0, var));
  }
  est.tau_mean.resize(g);
  est.tau_sd.resize(g);
  for (int h = 0; h < g; ++h) {
    double mean = tau_e[h] * t_inv;
    double var = tau_v[h] * t_inv + (tau_e2[h] * t_inv - mean * mean);
    est.tau_mean[h] = mean;
    est.tau_sd[h] = std::sqrt(std::max(0.0, var));
  }
  return est;
}

ModalClustering modal_clustering(const Trace& trace) {
  if (!trace.has_z)
    throw ValidationError("modal clustering needs stored memberships");
  const size_t t_total = trace.size();
  if (t_total == 0) throw ValidationError("empty trace");
  const int n = trace.n_items;
  const int g = trace.has_snapshots ? trace.snap_g : [&] {
    int mx = 0;
    for (uint16_t zi : trace.z) mx = std::max<int>(mx, zi + 1);
    return mx;
  }();

  std::vector<int32_t> counts(static_cast<size_t>(n) * g, 0);
  for (size_t t = 0; t < t_total; ++t) {
    auto z = trace.z_at(t);
    for (int i = 0; i < n; ++i) ++counts[static_cast<size_t>(i) * g + z[i]];
  }

  ModalClustering mc;
  mc.assignment.resize(n);
  mc.probability.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int h = 1; h < g; ++h)
      if (counts[static_cast<size_t>(i) * g + h] >
          counts[static_cast<size_t>(i) * g + best])
        best = h;
    mc.assignment[i] = best;
    mc.probability[i] = counts[static_cast<size_t>(i) * g + best] /
                        static_cast<double>(t_total);
  }
  return mc;
}

}  // namespace lcavs::posthoc
