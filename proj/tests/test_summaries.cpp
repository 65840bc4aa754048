#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lcavs/rng.hpp"
#include "lcavs/summaries.hpp"

using namespace lcavs;
using namespace lcavs::summaries;

namespace {

Trace search_trace(const std::vector<int>& gs,
                   const std::vector<std::vector<uint8_t>>& masks) {
  Trace tr;
  tr.n_vars = static_cast<int>(masks.front().size());
  for (size_t t = 0; t < gs.size(); ++t) {
    int k = 0;
    for (uint8_t b : masks[t]) k += b;
    tr.records.push_back({static_cast<int64_t>(t + 1),
                          -100.0 - static_cast<double>(t % 7), gs[t], k, 0.5});
    tr.masks.insert(tr.masks.end(), masks[t].begin(), masks[t].end());
  }
  return tr;
}

// Pair-by-pair Rand index, the O(N^2) definition.
double naive_rand(std::span<const int> a, std::span<const int> b) {
  int64_t agree = 0, pairs = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) {
      ++pairs;
      agree += ((a[i] == a[j]) == (b[i] == b[j]));
    }
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("group posterior") {
  SUBCASE("all sweeps at G = 2") {
    auto tr = search_trace({2, 2, 2, 2}, {{1}, {1}, {1}, {1}});
    auto gp = group_posterior(tr, 5);
    CHECK(gp.p[1] == 1.0);
    CHECK(gp.modal_g() == 2);
  }

  SUBCASE("hand-counted sequence 2,2,3,2") {
    auto tr = search_trace({2, 2, 3, 2}, {{1}, {1}, {1}, {1}});
    auto gp = group_posterior(tr, 6);
    CHECK(gp.p[0] == 0.0);
    CHECK(gp.p[1] == doctest::Approx(0.75));
    CHECK(gp.p[2] == doctest::Approx(0.25));
    CHECK(gp.p[3] == 0.0);
    CHECK(gp.counts[1] + gp.counts[2] == gp.total);
    double s = 0.0;
    for (double p : gp.p) s += p;
    CHECK(std::abs(s - 1.0) <= 4e-16);
  }

  SUBCASE("empty trace is an error") {
    Trace tr;
    tr.n_vars = 1;
    CHECK_THROWS_AS(group_posterior(tr, 3), ValidationError);
  }
}

TEST_CASE("coincidence matrix") {
  SUBCASE("a variable included in every sweep scores 1 for visited rows") {
    auto tr = search_trace({2, 3, 2}, {{1, 0}, {1, 1}, {1, 0}});
    auto cm = coincidence(tr, 4);
    CHECK(cm.visited[1]);
    CHECK(cm.visited[2]);
    CHECK(!cm.visited[0]);
    CHECK(!cm.visited[3]);
    CHECK(cm.at(2, 0) == doctest::Approx(1.0));
    CHECK(cm.at(3, 0) == doctest::Approx(1.0));
  }

  SUBCASE("two-sweep half inclusion") {
    auto tr = search_trace({2, 2}, {{1}, {0}});
    auto cm = coincidence(tr, 3);
    CHECK(cm.at(2, 0) == doctest::Approx(0.5));
  }

  SUBCASE("entries bounded in [0,1] and the inclusion-event cross-check") {
    Rng rng(83, 0);
    std::vector<int> gs;
    std::vector<std::vector<uint8_t>> masks;
    int64_t events = 0;
    for (int t = 0; t < 200; ++t) {
      gs.push_back(1 + static_cast<int>(rng.uniform_below(4)));
      std::vector<uint8_t> m(3);
      for (auto& b : m) {
        b = rng.uniform() < 0.5;
        events += b;
      }
      masks.push_back(m);
    }
    auto tr = search_trace(gs, masks);
    auto cm = coincidence(tr, 4);
    double recovered = 0.0;
    for (int k = 1; k <= 4; ++k) {
      if (!cm.visited[k - 1]) continue;
      for (int m = 0; m < 3; ++m) {
        CHECK(cm.at(k, m) >= 0.0);
        CHECK(cm.at(k, m) <= 1.0);
        recovered += cm.at(k, m) * static_cast<double>(cm.visits[k - 1]);
      }
    }
    CHECK(recovered == doctest::Approx(static_cast<double>(events)).epsilon(1e-9));
  }
}

TEST_CASE("rand index") {
  SUBCASE("identical partitions score 1") {
    std::vector<int> a{0, 1, 2, 1, 0};
    CHECK(rand_index(a, a) == doctest::Approx(1.0));
  }

  SUBCASE("hand-enumerated three-item case") {
    std::vector<int> a{1, 1, 2}, b{1, 2, 2};
    CHECK(rand_index(a, b) == doctest::Approx(1.0 / 3));
  }

  SUBCASE("symmetric, label-invariant, matches the pairwise definition") {
    Rng rng(85, 0);
    for (int trial = 0; trial < 20; ++trial) {
      int n = 5 + static_cast<int>(rng.uniform_below(40));
      std::vector<int> a(n), b(n);
      for (int i = 0; i < n; ++i) {
        a[i] = static_cast<int>(rng.uniform_below(4));
        b[i] = static_cast<int>(rng.uniform_below(3));
      }
      double r = rand_index(a, b);
      CHECK(r == doctest::Approx(naive_rand(a, b)).epsilon(1e-12));
      CHECK(r == doctest::Approx(rand_index(b, a)).epsilon(1e-12));
      auto a2 = a;
      for (auto& v : a2) v = 42 - v;  // relabel
      CHECK(r == doctest::Approx(rand_index(a2, b)).epsilon(1e-12));
    }
  }

  SUBCASE("length mismatch is an error") {
    std::vector<int> a{0, 1}, b{0, 1, 1};
    CHECK_THROWS_AS(rand_index(a, b), ValidationError);
  }
}

TEST_CASE("agreement count maximizes over label bijections") {
  std::vector<int> truth{0, 0, 0, 1, 1, 2, 2, 2};
  std::vector<int> flipped{2, 2, 2, 0, 0, 1, 1, 1};  // same partition, renamed
  CHECK(agreement_count(truth, flipped) == 8);

  std::vector<int> noisy{2, 2, 1, 0, 0, 1, 1, 1};  // one item moved
  CHECK(agreement_count(truth, noisy) == 7);

  // With only two labels available the two truth-1 items cannot be matched.
  std::vector<int> two{0, 0, 0, 1, 1, 1, 1, 1};
  CHECK(agreement_count(truth, two) == 6);
}

TEST_CASE("autocorrelation and effective sample size") {
  SUBCASE("iid noise has ESS close to T") {
    Rng rng(87, 0);
    const int t = 10000;
    std::vector<double> x(t);
    for (auto& v : x) v = rng.normal();
    auto out = autocorr_ess(x);
    CHECK(!out.degenerate);
    CHECK(out.ess > 0.85 * t);
    CHECK(out.ess < 1.15 * t);
  }

  SUBCASE("AR(1) with coefficient 0.9 matches the analytic ESS") {
    Rng rng(89, 0);
    const int t = 100000;
    std::vector<double> x(t);
    double prev = 0.0;
    for (int i = 0; i < t; ++i) {
      prev = 0.9 * prev + rng.normal();
      x[i] = prev;
    }
    auto out = autocorr_ess(x);
    double expected = t * (1.0 - 0.9) / (1.0 + 0.9);
    CHECK(out.ess > 0.8 * expected);
    CHECK(out.ess < 1.2 * expected);
    CHECK(out.acf[0] == doctest::Approx(0.9).epsilon(0.02));
  }

  SUBCASE("constant series is degenerate with ESS = T") {
    std::vector<double> x(50, 3.14);
    auto out = autocorr_ess(x);
    CHECK(out.degenerate);
    CHECK(out.ess == doctest::Approx(50.0));
  }

  SUBCASE("short series are rejected") {
    std::vector<double> x(5, 1.0);
    CHECK_THROWS_AS(autocorr_ess(x), ValidationError);
  }
}

TEST_CASE("marginal inclusion probabilities") {
  auto tr = search_trace({2, 2, 2, 2}, {{1, 0}, {1, 0}, {1, 1}, {0, 0}});
  auto p = inclusion_probability(tr);
  CHECK(p[0] == doctest::Approx(0.75));
  CHECK(p[1] == doctest::Approx(0.25));
}
