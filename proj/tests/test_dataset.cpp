#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lcavs/dataset.hpp"
#include "lcavs/rng.hpp"

using namespace lcavs;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

}  // namespace

TEST_CASE("3x2 csv round-trips with inferred categories") {
  auto p = write_temp("ds_roundtrip.csv", "1,2\n2,1\n1,1\n");
  auto data = load_dataset(p);
  CHECK(data.n_items() == 3);
  CHECK(data.n_vars() == 2);
  CHECK(data.categories() == std::vector<int>{2, 2});
  CHECK(data.at(0, 0) == 1);
  CHECK(data.at(0, 1) == 2);
  CHECK(data.at(1, 0) == 2);
  CHECK(data.at(2, 1) == 1);
}

TEST_CASE("header row is auto-detected") {
  auto p = write_temp("ds_header.csv", "a,b\n1,2\n2,1\n");
  auto data = load_dataset(p);
  CHECK(data.n_items() == 2);
  CHECK(data.at(0, 1) == 2);
}

TEST_CASE("zero codes are rejected, not shifted") {
  auto p = write_temp("ds_zero.csv", "1,2\n0,1\n");
  CHECK_THROWS_AS(load_dataset(p), ParseError);
  try {
    load_dataset(p);
  } catch (const ParseError& e) {
    std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 1") != std::string::npos);
  }
}

TEST_CASE("max observed code fixes the category count") {
  auto p = write_temp("ds_max.csv", "1,1\n2,1\n3,2\n1,2\n2,1\n");
  auto data = load_dataset(p);
  CHECK(data.categories() == std::vector<int>{3, 2});
}

TEST_CASE("declared categories allow unseen codes but bound observed ones") {
  auto p = write_temp("ds_decl.csv", "1,1\n2,2\n");
  auto data = load_dataset(p, std::vector<int>{4, 2});
  CHECK(data.n_categories(0) == 4);
  CHECK_THROWS_AS(load_dataset(p, std::vector<int>{1, 2}), ParseError);
  CHECK_THROWS_AS(load_dataset(p, std::vector<int>{2}), ValidationError);
}

TEST_CASE("degenerate single-category column is rejected") {
  auto p = write_temp("ds_degen.csv", "1,1\n1,2\n1,1\n");
  CHECK_THROWS_AS(load_dataset(p), ParseError);
}

TEST_CASE("malformed cells give named parse errors, never crashes") {
  CHECK_THROWS_AS(load_dataset(write_temp("ds_bad1.csv", "1,2\n2,x\n")), ParseError);
  CHECK_THROWS_AS(load_dataset(write_temp("ds_bad2.csv", "1,2\n2,\n")), ParseError);
  CHECK_THROWS_AS(load_dataset(write_temp("ds_bad3.csv", "1,2\n2\n")), ParseError);
  CHECK_THROWS_AS(load_dataset(write_temp("ds_bad4.csv", "")), ParseError);
  CHECK_THROWS_AS(load_dataset(write_temp("ds_bad5.csv", "1.5,2\n1,2\n")), ParseError);
  CHECK_THROWS_AS(load_dataset(fs::path("/nonexistent/nowhere.csv")), ParseError);
}

TEST_CASE("load, save, load is the identity") {
  Rng rng(5, 0);
  const int n = 40, m = 5;
  std::vector<int> cats{2, 3, 4, 2, 5};
  std::vector<int32_t> cells;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      cells.push_back(1 + static_cast<int>(rng.uniform_below(cats[j])));
  // Make sure the top category appears so inference recovers C_m.
  for (int j = 0; j < m; ++j) cells[j] = cats[j];
  CategoricalDataset data(n, m, cats, cells);

  auto p = fs::temp_directory_path() / "ds_saved.csv";
  save_csv(data, p, true);
  auto loaded = load_dataset(p);
  CHECK(loaded.categories() == data.categories());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) CHECK(loaded.at(i, j) == data.at(i, j));
}

TEST_CASE("validate_config reports each violated invariant by field") {
  auto p = write_temp("ds_cfg.csv", "1,2\n2,1\n1,1\n2,2\n");
  auto data = load_dataset(p);
  Priors priors;
  priors.g_max = 4;
  RunConfig cfg;
  cfg.initial_g = 1;

  CHECK_NOTHROW(validate_config(cfg, priors, data));

  SUBCASE("g_max zero") {
    priors.g_max = 0;
    CHECK_THROWS_WITH_AS(validate_config(cfg, priors, data),
                         doctest::Contains("g_max"), ValidationError);
  }
  SUBCASE("initial_g above g_max") {
    priors.g_max = 2;
    cfg.initial_g = 3;
    CHECK_THROWS_WITH_AS(validate_config(cfg, priors, data),
                         doctest::Contains("initial_g"), ValidationError);
  }
  SUBCASE("g_max above N") {
    priors.g_max = 10;
    CHECK_THROWS_WITH_AS(validate_config(cfg, priors, data),
                         doctest::Contains("g_max"), ValidationError);
  }
  SUBCASE("bad alpha") {
    priors.alpha = 0.0;
    CHECK_THROWS_WITH_AS(validate_config(cfg, priors, data),
                         doctest::Contains("alpha"), ValidationError);
  }
  SUBCASE("bad pi") {
    priors.pi_mode = PiPrior::fixed(1.0);
    CHECK_THROWS_WITH_AS(validate_config(cfg, priors, data),
                         doctest::Contains("pi"), ValidationError);
  }
  SUBCASE("bad hyper") {
    priors.pi_mode = PiPrior::hyper(0.0, 1.0);
    CHECK_THROWS_WITH_AS(validate_config(cfg, priors, data),
                         doctest::Contains("a0"), ValidationError);
  }
  SUBCASE("zero iterations") {
    cfg.iterations = 0;
    CHECK_THROWS_WITH_AS(validate_config(cfg, priors, data),
                         doctest::Contains("iterations"), ValidationError);
  }
  SUBCASE("zero thin") {
    cfg.thin = 0;
    CHECK_THROWS_WITH_AS(validate_config(cfg, priors, data),
                         doctest::Contains("thin"), ValidationError);
  }
}

TEST_CASE("defaults pass validation on a valid dataset") {
  auto p = write_temp("ds_defaults.csv", "1,2\n2,1\n1,1\n2,2\n");
  auto data = load_dataset(p);
  Priors priors;  // alpha 0.5, beta 1, pi 0.5, g_max 30
  priors.g_max = std::min(30, data.n_items());
  RunConfig cfg;
  CHECK_NOTHROW(validate_config(cfg, priors, data));
}
