#include "lcavs/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lcavs/common.hpp"
#include "lcavs/relabel.hpp"

namespace lcavs::summaries {

int GroupPosterior::modal_g() const {
  int best = 0;
  for (size_t k = 1; k < counts.size(); ++k)
    if (counts[k] > counts[best]) best = static_cast<int>(k);
  return best + 1;
}

GroupPosterior group_posterior(const Trace& trace, int g_max) {
  if (trace.records.empty()) throw ValidationError("empty trace");
  GroupPosterior gp;
  gp.counts.assign(g_max, 0);
  for (const auto& rec : trace.records) {
    if (rec.g < 1 || rec.g > g_max)
      throw ValidationError("trace contains g outside 1..g_max");
    ++gp.counts[rec.g - 1];
  }
  gp.total = static_cast<int64_t>(trace.records.size());
  gp.p.resize(g_max);
  for (int k = 0; k < g_max; ++k)
    gp.p[k] = static_cast<double>(gp.counts[k]) / static_cast<double>(gp.total);
  return gp;
}

CoincidenceMatrix coincidence(const Trace& trace, int g_max) {
  if (trace.records.empty()) throw ValidationError("empty trace");
  CoincidenceMatrix cm;
  cm.g_max = g_max;
  cm.n_vars = trace.n_vars;
  cm.visits.assign(g_max, 0);
  cm.visited.assign(g_max, 0);
  std::vector<int64_t> incl(static_cast<size_t>(g_max) * trace.n_vars, 0);
  for (size_t t = 0; t < trace.size(); ++t) {
    int k = trace.records[t].g - 1;
    ++cm.visits[k];
    auto mask = trace.mask(t);
    for (int m = 0; m < trace.n_vars; ++m)
      incl[static_cast<size_t>(k) * trace.n_vars + m] += mask[m];
  }
  cm.c.assign(static_cast<size_t>(g_max) * trace.n_vars, 0.0);
  for (int k = 0; k < g_max; ++k) {
    if (cm.visits[k] == 0) continue;
    cm.visited[k] = 1;
    for (int m = 0; m < trace.n_vars; ++m)
      cm.c[static_cast<size_t>(k) * trace.n_vars + m] =
          static_cast<double>(incl[static_cast<size_t>(k) * trace.n_vars + m]) /
          static_cast<double>(cm.visits[k]);
  }
  return cm;
}

std::vector<double> inclusion_probability(const Trace& trace) {
  if (trace.records.empty()) throw ValidationError("empty trace");
  std::vector<int64_t> counts(trace.n_vars, 0);
  for (size_t t = 0; t < trace.size(); ++t) {
    auto mask = trace.mask(t);
    for (int m = 0; m < trace.n_vars; ++m) counts[m] += mask[m];
  }
  std::vector<double> out(trace.n_vars);
  for (int m = 0; m < trace.n_vars; ++m)
    out[m] = static_cast<double>(counts[m]) / static_cast<double>(trace.size());
  return out;
}

namespace {

// Contingency table with labels compacted to 0..K-1 per side.
struct Contingency {
  int ka = 0, kb = 0;
  std::vector<int64_t> n;   // ka x kb
  std::vector<int64_t> a;   // row sums
  std::vector<int64_t> b;   // column sums

  Contingency(std::span<const int> za, std::span<const int> zb) {
    std::map<int, int> ma, mb;
    for (int v : za)
      ma.emplace(v, static_cast<int>(ma.size()));
    for (int v : zb)
      mb.emplace(v, static_cast<int>(mb.size()));
    ka = static_cast<int>(ma.size());
    kb = static_cast<int>(mb.size());
    n.assign(static_cast<size_t>(ka) * kb, 0);
    a.assign(ka, 0);
    b.assign(kb, 0);
    for (size_t i = 0; i < za.size(); ++i) {
      int ia = ma[za[i]], ib = mb[zb[i]];
      ++n[static_cast<size_t>(ia) * kb + ib];
      ++a[ia];
      ++b[ib];
    }
  }
};

inline int64_t choose2(int64_t x) { return x * (x - 1) / 2; }

}  // namespace

double rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw ValidationError("partitions differ in length");
  if (a.empty()) throw ValidationError("empty partitions");
  if (a.size() == 1) return 1.0;
  Contingency ct(a, b);
  int64_t pairs = choose2(static_cast<int64_t>(a.size()));
  int64_t same_both = 0;
  for (int64_t nij : ct.n) same_both += choose2(nij);
  int64_t same_a = 0, same_b = 0;
  for (int64_t x : ct.a) same_a += choose2(x);
  for (int64_t x : ct.b) same_b += choose2(x);
  int64_t agreements = pairs + 2 * same_both - same_a - same_b;
  return static_cast<double>(agreements) / static_cast<double>(pairs);
}

int64_t agreement_count(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw ValidationError("partitions differ in length");
  Contingency ct(a, b);
  int k = std::max(ct.ka, ct.kb);
  // Maximize matched mass: assignment on (max - n_ij), padded square.
  int64_t mx = 0;
  for (int64_t nij : ct.n) mx = std::max(mx, nij);
  std::vector<int64_t> cost(static_cast<size_t>(k) * k, mx);
  for (int i = 0; i < ct.ka; ++i)
    for (int j = 0; j < ct.kb; ++j)
      cost[static_cast<size_t>(i) * k + j] = mx - ct.n[static_cast<size_t>(i) * ct.kb + j];
  auto sigma = relabel::solve_assignment(cost, k);
  int64_t agree = 0;
  for (int i = 0; i < ct.ka; ++i)
    if (sigma[i] < ct.kb) agree += ct.n[static_cast<size_t>(i) * ct.kb + sigma[i]];
  return agree;
}

AcfEss autocorr_ess(std::span<const double> series, int max_lag) {
  const int t = static_cast<int>(series.size());
  if (t < 10) throw ValidationError("series too short for autocorrelation");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= t;
  double denom = 0.0;
  for (double x : series) denom += (x - mean) * (x - mean);

  AcfEss out;
  int report = std::min(max_lag, t - 1);
  out.acf.assign(report, 0.0);
  auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  if (*lo == *hi || denom == 0.0) {
    out.degenerate = true;
    out.ess = t;
    return out;
  }

  auto rho = [&](int lag) {
    double s = 0.0;
    for (int i = 0; i + lag < t; ++i)
      s += (series[i] - mean) * (series[i + lag] - mean);
    return s / denom;
  };

  for (int lag = 1; lag <= report; ++lag) out.acf[lag - 1] = rho(lag);

  // Initial positive sequence: accumulate until the first non-positive value.
  double s = 0.0;
  int scan_cap = std::min(t - 1, 1000);
  for (int lag = 1; lag <= scan_cap; ++lag) {
    double r = lag <= report ? out.acf[lag - 1] : rho(lag);
    if (r <= 0.0) break;
    s += r;
  }
  out.ess = t / (1.0 + 2.0 * s);
  return out;
}

}  // namespace lcavs::summaries
