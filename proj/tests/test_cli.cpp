#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(LCAVS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_config(const fs::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

struct Workspace {
  fs::path root, sim, cfg;
  Workspace() {
    root = fresh_dir("lcavs_cli_ws");
    sim = root / "sim";
    REQUIRE(run_cli("simulate --spec dr-binary --n 200 --seed 5 --out " +
                    sim.string()) == 0);
    cfg = root / "config.json";
    write_config(cfg,
                 R"({"iterations": 1500, "burn_in": 200, "thin": 5, "seed": 9})");
  }
};

}  // namespace

TEST_CASE("missing input file exits 2 and names the path in the manifest") {
  auto out = fresh_dir("lcavs_cli_missing");
  int code = run_cli("fit --data /no/such/file.csv --out " + out.string());
  CHECK(code == 2);
  auto manifest = json::parse(slurp(out / "manifest.json"));
  REQUIRE(manifest.contains("error"));
  std::string err = manifest["error"];
  CHECK(err.find("/no/such/file.csv") != std::string::npos);
}

TEST_CASE("unknown config fields are rejected") {
  Workspace ws;
  auto bad = ws.root / "bad.json";
  write_config(bad, R"({"iterations": 100, "iteration": 5})");
  auto out = fresh_dir("lcavs_cli_badcfg");
  CHECK(run_cli("fit --data " + (ws.sim / "data.csv").string() + " --config " +
                bad.string() + " --out " + out.string()) == 2);
}

TEST_CASE("fit is byte-deterministic under a fixed seed") {
  Workspace ws;
  auto out1 = fresh_dir("lcavs_cli_det1");
  auto out2 = fresh_dir("lcavs_cli_det2");
  std::string base = "fit --data " + (ws.sim / "data.csv").string() +
                     " --config " + ws.cfg.string() + " --out ";
  REQUIRE(run_cli(base + out1.string()) == 0);
  REQUIRE(run_cli(base + out2.string()) == 0);
  for (const char* name : {"trace.csv", "inclusion.csv", "gprobs.json",
                           "coincidence.csv", "diagnostics.json"})
    CHECK(slurp(out1 / name) == slurp(out2 / name));

  // Manifests agree on everything except wall time.
  auto m1 = json::parse(slurp(out1 / "manifest.json"));
  auto m2 = json::parse(slurp(out2 / "manifest.json"));
  m1.erase("wall_time_s");
  m2.erase("wall_time_s");
  CHECK(m1 == m2);

  SUBCASE("a different seed changes the trace") {
    auto out3 = fresh_dir("lcavs_cli_det3");
    REQUIRE(run_cli("fit --data " + (ws.sim / "data.csv").string() +
                    " --config " + ws.cfg.string() + " --seed 777 --out " +
                    out3.string()) == 0);
    CHECK(slurp(out1 / "trace.csv") != slurp(out3 / "trace.csv"));
  }
}

TEST_CASE("summarize regenerates the fit summaries byte for byte") {
  Workspace ws;
  auto fit = fresh_dir("lcavs_cli_fit");
  REQUIRE(run_cli("fit --data " + (ws.sim / "data.csv").string() + " --config " +
                  ws.cfg.string() + " --out " + fit.string()) == 0);
  auto out = fresh_dir("lcavs_cli_sum");
  REQUIRE(run_cli("summarize --trace " + fit.string() + " --out " +
                  out.string()) == 0);
  for (const char* name : {"gprobs.json", "coincidence.csv", "diagnostics.json"})
    CHECK(slurp(fit / name) == slurp(out / name));

  SUBCASE("a truncated trace still summarizes, to different values") {
    auto half_dir = fresh_dir("lcavs_cli_half");
    std::string trace = slurp(fit / "trace.csv");
    std::string incl = slurp(fit / "inclusion.csv");
    auto cut = [](const std::string& text) {
      size_t rows = 0, pos = 0;
      std::vector<size_t> breaks;
      while ((pos = text.find('\n', pos)) != std::string::npos) {
        breaks.push_back(pos);
        ++pos;
        ++rows;
      }
      size_t keep = 1 + (rows - 1) / 2;  // header plus half the records
      return text.substr(0, breaks[keep - 1] + 1);
    };
    std::ofstream(half_dir / "trace.csv") << cut(trace);
    std::ofstream(half_dir / "inclusion.csv") << cut(incl);
    std::ofstream(half_dir / "manifest.json") << slurp(fit / "manifest.json");
    auto out_half = fresh_dir("lcavs_cli_sumhalf");
    REQUIRE(run_cli("summarize --trace " + half_dir.string() + " --out " +
                    out_half.string()) == 0);
    CHECK(slurp(out_half / "gprobs.json") != slurp(out / "gprobs.json"));
  }

  SUBCASE("an empty trace file is an error") {
    auto empty_dir = fresh_dir("lcavs_cli_empty");
    std::ofstream(empty_dir / "trace.csv") << "sweep,log_posterior,g,n_included,pi\n";
    std::ofstream(empty_dir / "inclusion.csv") << "v1\n";
    std::ofstream(empty_dir / "manifest.json") << slurp(fit / "manifest.json");
    auto out_e = fresh_dir("lcavs_cli_sume");
    CHECK(run_cli("summarize --trace " + empty_dir.string() + " --out " +
                  out_e.string()) == 2);
  }

  SUBCASE("a corrupt trace is a parse error") {
    auto bad_dir = fresh_dir("lcavs_cli_badtrace");
    std::ofstream(bad_dir / "trace.csv")
        << "sweep,log_posterior,g,n_included,pi\n12,oops,2,3,0.5\n";
    std::ofstream(bad_dir / "inclusion.csv") << "v1\n1\n";
    std::ofstream(bad_dir / "manifest.json") << slurp(fit / "manifest.json");
    auto out_b = fresh_dir("lcavs_cli_sumb");
    CHECK(run_cli("summarize --trace " + bad_dir.string() + " --out " +
                  out_b.string()) == 2);
  }
}

TEST_CASE("posthoc: explicit model, modal model, and G = 1 edge") {
  Workspace ws;
  auto fit = fresh_dir("lcavs_cli_fit2");
  REQUIRE(run_cli("fit --data " + (ws.sim / "data.csv").string() + " --config " +
                  ws.cfg.string() + " --out " + fit.string()) == 0);

  auto modal = json::parse(slurp(fit / "gprobs.json"))["modal_g"].get<int>();
  auto from_fit = fresh_dir("lcavs_cli_ph_fit");
  REQUIRE(run_cli("posthoc --data " + (ws.sim / "data.csv").string() +
                  " --fit " + fit.string() + " --config " + ws.cfg.string() +
                  " --out " + from_fit.string()) == 0);
  auto params = json::parse(slurp(from_fit / "params.json"));
  CHECK(params["g"].get<int>() == modal);

  SUBCASE("explicit path equals the modal path for the same model") {
    std::string vars;
    for (const auto& v : params["variables"]) {
      if (!vars.empty()) vars += " ";
      vars += std::to_string(v.get<int>());
    }
    auto explicit_dir = fresh_dir("lcavs_cli_ph_exp");
    REQUIRE(run_cli("posthoc --data " + (ws.sim / "data.csv").string() +
                    " --g " + std::to_string(modal) + " --vars " + vars +
                    " --config " + ws.cfg.string() + " --out " +
                    explicit_dir.string()) == 0);
    CHECK(slurp(from_fit / "params.json") == slurp(explicit_dir / "params.json"));
    CHECK(slurp(from_fit / "clustering.csv") ==
          slurp(explicit_dir / "clustering.csv"));
  }

  SUBCASE("G = 1 gives tau exactly one") {
    auto g1 = fresh_dir("lcavs_cli_ph_g1");
    REQUIRE(run_cli("posthoc --data " + (ws.sim / "data.csv").string() +
                    " --g 1 --vars 1 2 3 --config " + ws.cfg.string() +
                    " --out " + g1.string()) == 0);
    auto p = json::parse(slurp(g1 / "params.json"));
    CHECK(p["tau"]["1"]["tau_mean"].get<double>() == 1.0);
  }

  SUBCASE("G beyond g_max is rejected") {
    auto bad = fresh_dir("lcavs_cli_ph_bad");
    CHECK(run_cli("posthoc --data " + (ws.sim / "data.csv").string() +
                  " --g 31 --vars 1 --config " + ws.cfg.string() + " --out " +
                  bad.string()) == 2);
  }
}

TEST_CASE("rjmcmc command emits the shared artifact formats") {
  Workspace ws;
  auto out = fresh_dir("lcavs_cli_rj");
  REQUIRE(run_cli("rjmcmc --data " + (ws.sim / "data.csv").string() +
                  " --g 2 --epsilon 1.0 --config " + ws.cfg.string() +
                  " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "trace.csv"));
  CHECK(fs::exists(out / "inclusion.csv"));
  CHECK(fs::exists(out / "rj_summary.json"));
  auto s = json::parse(slurp(out / "rj_summary.json"));
  CHECK(s["inclusion_probability"].size() == 13);

  SUBCASE("deterministic under a fixed seed") {
    auto out2 = fresh_dir("lcavs_cli_rj2");
    REQUIRE(run_cli("rjmcmc --data " + (ws.sim / "data.csv").string() +
                    " --g 2 --epsilon 1.0 --config " + ws.cfg.string() +
                    " --out " + out2.string()) == 0);
    CHECK(slurp(out / "trace.csv") == slurp(out2 / "trace.csv"));
  }
}

TEST_CASE("simulate artifacts are deterministic and self-consistent") {
  auto a = fresh_dir("lcavs_cli_sim_a");
  auto b = fresh_dir("lcavs_cli_sim_b");
  REQUIRE(run_cli("simulate --spec dr-nonbinary --n 150 --seed 11 --out " +
                  a.string()) == 0);
  REQUIRE(run_cli("simulate --spec dr-nonbinary --n 150 --seed 11 --out " +
                  b.string()) == 0);
  for (const char* name : {"data.csv", "truth.csv", "oracle.csv", "spec.json"})
    CHECK(slurp(a / name) == slurp(b / name));

  SUBCASE("unknown spec name fails") {
    auto c = fresh_dir("lcavs_cli_sim_c");
    CHECK(run_cli("simulate --spec nope --out " + c.string()) == 2);
  }
}

TEST_CASE("multi-chain fit writes per-chain and pooled summaries") {
  Workspace ws;
  auto out = fresh_dir("lcavs_cli_chains");
  REQUIRE(run_cli("fit --data " + (ws.sim / "data.csv").string() + " --config " +
                  ws.cfg.string() + " --chains 2 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "chain_1" / "trace.csv"));
  CHECK(fs::exists(out / "chain_2" / "trace.csv"));
  CHECK(fs::exists(out / "gprobs.json"));
  CHECK(slurp(out / "chain_1" / "trace.csv") !=
        slurp(out / "chain_2" / "trace.csv"));
}
