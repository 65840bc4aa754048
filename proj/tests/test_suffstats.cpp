#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "lcavs/rng.hpp"
#include "lcavs/suffstats.hpp"

using namespace lcavs;

namespace {

CategoricalDataset tiny() {
  // rows: (1,2), (2,1), (1,1)
  return CategoricalDataset(3, 2, {2, 2}, {1, 2, 2, 1, 1, 1});
}

CategoricalDataset make_dataset(Rng& rng, int n, const std::vector<int>& cats) {
  std::vector<int32_t> cells;
  for (int i = 0; i < n; ++i)
    for (size_t j = 0; j < cats.size(); ++j)
      cells.push_back(1 + static_cast<int>(rng.uniform_below(cats[j])));
  for (size_t j = 0; j < cats.size(); ++j) cells[j] = cats[j];
  return CategoricalDataset(n, static_cast<int>(cats.size()), cats, cells);
}

std::vector<int> random_z(Rng& rng, int n, int g) {
  std::vector<int> z(n);
  for (auto& zi : z) zi = static_cast<int>(rng.uniform_below(g));
  return z;
}

}  // namespace

TEST_CASE("single group tallies equal the marginals") {
  auto data = tiny();
  std::vector<int> z{0, 0, 0};
  SuffStats stats(data, z, 1);
  CHECK(stats.group_size(0) == 3);
  for (int m = 0; m < 2; ++m)
    for (int c = 1; c <= 2; ++c)
      CHECK(stats.count(0, m, c) == stats.marginal(m, c));
}

TEST_CASE("hand tally for z = (1,2,1)") {
  auto data = tiny();
  std::vector<int> z{0, 1, 0};
  SuffStats stats(data, z, 2);
  CHECK(stats.group_size(0) == 2);
  CHECK(stats.group_size(1) == 1);
  CHECK(stats.count(0, 0, 1) == 2);  // N_{1,1,1}
  CHECK(stats.count(0, 1, 2) == 1);  // N_{1,2,2}
  CHECK(stats.count(0, 1, 1) == 1);  // N_{1,2,1}
  CHECK(stats.count(1, 0, 2) == 1);  // N_{2,1,2}
  CHECK(stats.count(1, 1, 1) == 1);  // N_{2,2,1}
  CHECK(stats.count(1, 0, 1) == 0);
}

TEST_CASE("permuting items leaves all counts unchanged") {
  Rng rng(21, 0);
  auto data = make_dataset(rng, 30, {2, 3, 4});
  auto z = random_z(rng, 30, 3);
  SuffStats a(data, z, 3);

  // Same data with rows visited in a permuted order: rebuild via moves.
  std::vector<int> order(30);
  std::iota(order.begin(), order.end(), 0);
  for (int i = 29; i > 0; --i)
    std::swap(order[i], order[rng.uniform_below(i + 1)]);
  std::vector<int> z0(30, 0);
  SuffStats b(data, z0, 3);
  for (int i : order)
    if (z[i] != 0) b.move_item(i, 0, z[i]);
  CHECK(a == b);
}

TEST_CASE("move then move back restores the tables bitwise") {
  Rng rng(22, 0);
  auto data = make_dataset(rng, 20, {2, 2, 3});
  auto z = random_z(rng, 20, 3);
  SuffStats stats(data, z, 3);
  SuffStats before = stats;
  stats.move_item(7, z[7], (z[7] + 1) % 3);
  CHECK(!(stats == before));
  stats.move_item(7, (z[7] + 1) % 3, z[7]);
  CHECK(stats == before);

  SUBCASE("from == to is a no-op") {
    stats.move_item(3, z[3], z[3]);
    CHECK(stats == before);
  }
}

TEST_CASE("any single move equals a full rebuild") {
  Rng rng(23, 0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 5 + static_cast<int>(rng.uniform_below(30));
    int g = 2 + static_cast<int>(rng.uniform_below(3));
    auto data = make_dataset(rng, n, {2, 3, 2});
    auto z = random_z(rng, n, g);
    SuffStats stats(data, z, g);
    int item = static_cast<int>(rng.uniform_below(n));
    int to = static_cast<int>(rng.uniform_below(g));
    stats.move_item(item, z[item], to);
    z[item] = to;
    SuffStats rebuilt(data, z, g);
    CHECK(stats == rebuilt);
  }
}

TEST_CASE("moving the only member leaves an empty, legal group") {
  auto data = tiny();
  std::vector<int> z{0, 1, 0};
  SuffStats stats(data, z, 2);
  stats.move_item(1, 1, 0);
  CHECK(stats.group_size(1) == 0);
  for (int m = 0; m < 2; ++m)
    for (int c = 1; c <= 2; ++c) CHECK(stats.count(1, m, c) == 0);
}

TEST_CASE("split_counts") {
  Rng rng(24, 0);
  auto data = make_dataset(rng, 25, {2, 3});
  auto z = random_z(rng, 25, 2);
  SuffStats stats(data, z, 2);
  SuffStats before = stats;

  SUBCASE("empty member set appends an empty group") {
    auto split = stats.split_counts({}, 0);
    CHECK(stats == before);  // original untouched
    CHECK(split.n_groups() == 3);
    CHECK(split.group_size(2) == 0);
    CHECK(split.group_size(0) == stats.group_size(0));
  }

  SUBCASE("moving every member empties the source") {
    std::vector<int> members;
    for (int i = 0; i < 25; ++i)
      if (z[i] == 0) members.push_back(i);
    auto split = stats.split_counts(members, 0);
    CHECK(split.group_size(0) == 0);
    CHECK(split.group_size(2) == stats.group_size(0));
    for (int m = 0; m < 2; ++m)
      for (int c = 1; c <= data.n_categories(m); ++c)
        CHECK(split.count(2, m, c) == stats.count(0, m, c));
  }

  SUBCASE("random subset equals a rebuild") {
    std::vector<int> members;
    for (int i = 0; i < 25; ++i)
      if (z[i] == 0 && rng.uniform() < 0.5) members.push_back(i);
    auto split = stats.split_counts(members, 0);
    auto z2 = z;
    for (int i : members) z2[i] = 2;
    SuffStats rebuilt(data, z2, 3);
    CHECK(split == rebuilt);
  }

  SUBCASE("member outside the source group is an error") {
    int outsider = -1;
    for (int i = 0; i < 25; ++i)
      if (z[i] == 1) outsider = i;
    REQUIRE(outsider >= 0);
    std::vector<int> all_of_0{outsider};
    for (int i = 0; i < 25; ++i)
      if (z[i] == 0) all_of_0.push_back(i);
    CHECK_THROWS_AS(stats.split_counts(all_of_0, 0), Error);
  }
}

TEST_CASE("label out of range is rejected at build") {
  auto data = tiny();
  std::vector<int> z{0, 2, 0};
  CHECK_THROWS_AS(SuffStats(data, z, 2), ValidationError);
}

TEST_CASE("randomized op sequences stay consistent with a rebuild") {
  Rng rng(25, 0);
  auto data = make_dataset(rng, 40, {2, 3, 4, 2});
  int g = 3;
  auto z = random_z(rng, 40, g);
  SuffStats stats(data, z, g);

  for (int step = 0; step < 1200; ++step) {
    double u = rng.uniform();
    if (u < 0.80) {
      int item = static_cast<int>(rng.uniform_below(40));
      int to = static_cast<int>(rng.uniform_below(g));
      stats.move_item(item, z[item], to);
      z[item] = to;
    } else if (u < 0.90 && g < 6) {
      // adopt a split of a random group
      int from = static_cast<int>(rng.uniform_below(g));
      std::vector<int> members;
      for (int i = 0; i < 40; ++i)
        if (z[i] == from && rng.uniform() < 0.4) members.push_back(i);
      stats = stats.split_counts(members, from);
      for (int i : members) z[i] = g;
      ++g;
    } else if (g > 1) {
      int k = static_cast<int>(rng.uniform_below(g));
      int k2 = static_cast<int>(rng.uniform_below(g - 1));
      if (k2 >= k) ++k2;
      stats.merge_groups(k, k2);
      for (auto& zi : z)
        if (zi == k) zi = k2;
      int last = g - 1;
      if (k != last) {
        stats.swap_groups(k, last);
        for (auto& zi : z)
          if (zi == last) zi = k;
      }
      stats.pop_last_group();
      --g;
    }
    if (step % 100 == 0) stats.check_consistent(z);
  }
  stats.check_consistent(z);
  SuffStats rebuilt(data, z, g);
  CHECK(stats == rebuilt);
}
