#include <CLI11.hpp>

#include "lcavs/commands.hpp"

using namespace lcavs::commands;

int main(int argc, char** argv) {
  CLI::App app{"Collapsed-Gibbs latent class analysis with simultaneous "
               "selection of the number of groups and clustering variables"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a benchmark dataset");
  simulate->add_option("--spec", sim.spec_name, "dr-binary or dr-nonbinary")
      ->required();
  simulate->add_option("--n", sim.n_items, "number of items (0 = spec default)");
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--out", sim.out, "output directory")->required();

  FitArgs fit;
  uint64_t fit_seed = 0;
  auto* fitc = app.add_subcommand("fit", "run the trans-dimensional search");
  fitc->add_option("--data", fit.data, "CSV of 1-based category codes")->required();
  auto* fit_cfg = fitc->add_option("--config", "JSON run configuration");
  auto* fit_seed_opt = fitc->add_option("--seed", fit_seed, "seed override");
  fitc->add_option("--chains", fit.chains, "independent chains to run");
  fitc->add_option("--out", fit.out, "output directory")->required();

  PosthocArgs ph;
  uint64_t ph_seed = 0;
  int ph_g = 0;
  auto* phc = app.add_subcommand(
      "posthoc", "frozen-(G, variables) estimation run with relabeling");
  phc->add_option("--data", ph.data, "CSV of 1-based category codes")->required();
  auto* ph_fit = phc->add_option("--fit", "fit output directory (modal model)");
  auto* ph_g_opt = phc->add_option("--g", ph_g, "explicit number of groups");
  phc->add_option("--vars", ph.variables, "explicit clustering variables (1-based)");
  auto* ph_cfg = phc->add_option("--config", "JSON run configuration");
  auto* ph_seed_opt = phc->add_option("--seed", ph_seed, "seed override");
  phc->add_option("--out", ph.out, "output directory")->required();

  SummarizeArgs sum;
  auto* sumc = app.add_subcommand("summarize",
                                  "recompute summaries from stored trace files");
  sumc->add_option("--trace", sum.trace_dir, "directory holding trace.csv")
      ->required();
  sumc->add_option("--out", sum.out, "output directory")->required();

  RjmcmcArgs rj;
  uint64_t rj_seed = 0;
  auto* rjc = app.add_subcommand(
      "rjmcmc", "full-parameter Gibbs baseline with reversible-jump "
                "variable moves (binary data, fixed G)");
  rjc->add_option("--data", rj.data, "CSV of binary codes")->required();
  rjc->add_option("--g", rj.g, "fixed number of groups")->required();
  rjc->add_option("--epsilon", rj.epsilon, "proposal window");
  rjc->add_option("--freeze-vars", rj.freeze_variables,
                  "freeze this 1-based variable set (disables RJ moves)");
  auto* rj_cfg = rjc->add_option("--config", "JSON run configuration");
  auto* rj_seed_opt = rjc->add_option("--seed", rj_seed, "seed override");
  rjc->add_option("--out", rj.out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) return cmd_simulate(sim);
  if (fitc->parsed()) {
    if (*fit_cfg) fit.config = fs::path(fit_cfg->as<std::string>());
    if (*fit_seed_opt) fit.seed = fit_seed;
    return cmd_fit(fit);
  }
  if (phc->parsed()) {
    if (*ph_fit) ph.fit_dir = fs::path(ph_fit->as<std::string>());
    if (*ph_g_opt) ph.g = ph_g;
    if (*ph_cfg) ph.config = fs::path(ph_cfg->as<std::string>());
    if (*ph_seed_opt) ph.seed = ph_seed;
    return cmd_posthoc(ph);
  }
  if (sumc->parsed()) return cmd_summarize(sum);
  if (rjc->parsed()) {
    if (*rj_cfg) rj.config = fs::path(rj_cfg->as<std::string>());
    if (*rj_seed_opt) rj.seed = rj_seed;
    return cmd_rjmcmc(rj);
  }
  return 1;
}
