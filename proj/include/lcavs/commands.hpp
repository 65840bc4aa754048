#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lcavs/dataset.hpp"
#include "lcavs/posthoc.hpp"
#include "lcavs/sampler.hpp"

namespace lcavs::commands {

namespace fs = std::filesystem;

/**
 * The resolved run configuration: RunConfig + Priors + MoveParams parsed
 * from a JSON document whose field names mirror the structs (iterations,
 * burn_in, thin, seed, initial_g, store_z, alpha, beta, pi_mode with
 * pi / a0, b0, g_max, poisson_rate, p_g, eject_shape_a, categories).
 */
struct AppConfig {
  RunConfig run;
  Priors priors;
  MoveParams moves;
  std::optional<std::vector<int>> categories;
  bool g_max_explicit = false;
};

AppConfig parse_config_json(const std::string& text);
AppConfig load_app_config(const std::optional<fs::path>& path);

// --- artifact I/O -----------------------------------------------------------

void write_trace_artifacts(const fs::path& dir, const Trace& trace);

// trace.csv + inclusion.csv back into a Trace (records and masks only).
Trace read_trace_artifacts(const fs::path& dir);

// gprobs.json, coincidence.csv and diagnostics.json for a search trace.
void write_summary_artifacts(const fs::path& dir, const Trace& trace, int g_max);

void write_params_json(const fs::path& path,
                       const posthoc::ParameterEstimates& est);
void write_clustering_csv(const fs::path& path,
                          const posthoc::ModalClustering& mc);

std::string file_digest(const fs::path& path);

// --- commands ----------------------------------------------------------------

struct SimulateArgs {
  std::string spec_name;
  int n_items = 0;  // 0 = spec default
  uint64_t seed = 0;
  fs::path out;
};

struct FitArgs {
  fs::path data;
  std::optional<fs::path> config;
  fs::path out;
  std::optional<uint64_t> seed;
  int chains = 1;
};

struct PosthocArgs {
  fs::path data;
  std::optional<fs::path> fit_dir;     // source of modal (G, nu)
  std::optional<int> g;                // explicit G
  std::vector<int> variables;          // explicit 1-based clustering variables
  std::optional<fs::path> config;
  fs::path out;
  std::optional<uint64_t> seed;
};

struct SummarizeArgs {
  fs::path trace_dir;
  fs::path out;
};

struct RjmcmcArgs {
  fs::path data;
  int g = 2;
  double epsilon = 1.0;
  std::optional<fs::path> config;
  fs::path out;
  std::optional<uint64_t> seed;
  std::vector<int> freeze_variables;  // 1-based; non-empty freezes the mask
};

// Each command writes its artifacts plus manifest.json (always, with an
// error field on failure) and returns a process exit code: 0 success,
// 2 invalid input/config, 1 internal failure.
int cmd_simulate(const SimulateArgs& args);
int cmd_fit(const FitArgs& args);
int cmd_posthoc(const PosthocArgs& args);
int cmd_summarize(const SummarizeArgs& args);
int cmd_rjmcmc(const RjmcmcArgs& args);

}  // namespace lcavs::commands
