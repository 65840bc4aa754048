#include "lcavs/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "lcavs/posterior.hpp"
#include "lcavs/relabel.hpp"
#include "lcavs/rjmcmc.hpp"
#include "lcavs/simulate.hpp"
#include "lcavs/summaries.hpp"

namespace lcavs::commands {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

double number_or_throw(const json& j, const std::string& key) {
  if (!j.is_number())
    throw ValidationError(key + ": expected a number");
  return j.get<double>();
}

}  // namespace

std::string file_digest(const fs::path& path) {
  std::string bytes = read_file(path);
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

AppConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: expected a JSON object");

  AppConfig cfg;
  std::string pi_mode = "fixed";
  std::optional<double> pi, a0, b0;
  for (const auto& [key, value] : j.items()) {
    if (key == "iterations") cfg.run.iterations = static_cast<int64_t>(number_or_throw(value, key));
    else if (key == "burn_in") cfg.run.burn_in = static_cast<int64_t>(number_or_throw(value, key));
    else if (key == "thin") cfg.run.thin = static_cast<int64_t>(number_or_throw(value, key));
    else if (key == "seed") cfg.run.seed = static_cast<uint64_t>(number_or_throw(value, key));
    else if (key == "initial_g") cfg.run.initial_g = static_cast<int>(number_or_throw(value, key));
    else if (key == "store_z") {
      if (!value.is_boolean()) throw ValidationError("store_z: expected a boolean");
      cfg.run.store_z = value.get<bool>();
    } else if (key == "alpha") cfg.priors.alpha = number_or_throw(value, key);
    else if (key == "beta") cfg.priors.beta = number_or_throw(value, key);
    else if (key == "pi_mode") {
      if (!value.is_string()) throw ValidationError("pi_mode: expected 'fixed' or 'hyper'");
      pi_mode = value.get<std::string>();
      if (pi_mode != "fixed" && pi_mode != "hyper")
        throw ValidationError("pi_mode: expected 'fixed' or 'hyper'");
    } else if (key == "pi") pi = number_or_throw(value, key);
    else if (key == "a0") a0 = number_or_throw(value, key);
    else if (key == "b0") b0 = number_or_throw(value, key);
    else if (key == "g_max") {
      cfg.priors.g_max = static_cast<int>(number_or_throw(value, key));
      cfg.g_max_explicit = true;
    } else if (key == "poisson_rate") cfg.priors.poisson_rate = number_or_throw(value, key);
    else if (key == "p_g") cfg.moves.p_g = number_or_throw(value, key);
    else if (key == "eject_shape_a") cfg.moves.eject_shape_a = number_or_throw(value, key);
    else if (key == "categories") {
      if (!value.is_array()) throw ValidationError("categories: expected an array");
      std::vector<int> cats;
      for (const auto& v : value) cats.push_back(static_cast<int>(number_or_throw(v, key)));
      cfg.categories = std::move(cats);
    } else {
      throw ValidationError("config: unknown field '" + key + "'");
    }
  }
  if (pi_mode == "hyper") {
    cfg.priors.pi_mode = PiPrior::hyper(a0.value_or(1.0), b0.value_or(1.0));
    if (pi) throw ValidationError("pi: not meaningful in hyper mode");
  } else {
    cfg.priors.pi_mode = PiPrior::fixed(pi.value_or(0.5));
    if (a0 || b0) throw ValidationError("a0/b0: only meaningful in hyper mode");
  }
  if (!(cfg.moves.p_g > 0) || !(cfg.moves.p_g < 1))
    throw ValidationError("p_g: must lie strictly inside (0, 1)");
  if (!(cfg.moves.eject_shape_a > 0))
    throw ValidationError("eject_shape_a: must be positive");
  return cfg;
}

AppConfig load_app_config(const std::optional<fs::path>& path) {
  if (!path) return {};
  return parse_config_json(read_file(*path));
}

namespace {

json config_to_json(const AppConfig& cfg) {
  json j;
  j["iterations"] = cfg.run.iterations;
  j["burn_in"] = cfg.run.burn_in;
  j["thin"] = cfg.run.thin;
  j["seed"] = cfg.run.seed;
  j["initial_g"] = cfg.run.initial_g;
  j["store_z"] = cfg.run.store_z;
  j["alpha"] = cfg.priors.alpha;
  j["beta"] = cfg.priors.beta;
  if (cfg.priors.pi_mode.is_hyper()) {
    j["pi_mode"] = "hyper";
    j["a0"] = cfg.priors.pi_mode.a0;
    j["b0"] = cfg.priors.pi_mode.b0;
  } else {
    j["pi_mode"] = "fixed";
    j["pi"] = cfg.priors.pi_mode.pi;
  }
  j["g_max"] = cfg.priors.g_max;
  j["poisson_rate"] = cfg.priors.poisson_rate;
  j["p_g"] = cfg.moves.p_g;
  j["eject_shape_a"] = cfg.moves.eject_shape_a;
  if (cfg.categories) j["categories"] = *cfg.categories;
  return j;
}

json accepts_to_json(const AcceptCounts& a) {
  auto entry = [](int64_t proposed, int64_t accepted) {
    json e;
    e["proposed"] = proposed;
    e["accepted"] = accepted;
    e["rate"] = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
    return e;
  };
  json j;
  j["eject"] = entry(a.eject_proposed, a.eject_accepted);
  j["absorb"] = entry(a.absorb_proposed, a.absorb_accepted);
  j["include"] = entry(a.include_proposed, a.include_accepted);
  j["exclude"] = entry(a.exclude_proposed, a.exclude_accepted);
  return j;
}

AcceptCounts accepts_from_json(const json& j) {
  AcceptCounts a;
  a.eject_proposed = j.at("eject").at("proposed").get<int64_t>();
  a.eject_accepted = j.at("eject").at("accepted").get<int64_t>();
  a.absorb_proposed = j.at("absorb").at("proposed").get<int64_t>();
  a.absorb_accepted = j.at("absorb").at("accepted").get<int64_t>();
  a.include_proposed = j.at("include").at("proposed").get<int64_t>();
  a.include_accepted = j.at("include").at("accepted").get<int64_t>();
  a.exclude_proposed = j.at("exclude").at("proposed").get<int64_t>();
  a.exclude_accepted = j.at("exclude").at("accepted").get<int64_t>();
  return a;
}

// Shared scaffolding: runs `body`, always writes manifest.json, maps errors
// to exit codes.
class CommandRun {
 public:
  CommandRun(std::string command, fs::path out)
      : command_(std::move(command)),
        out_(std::move(out)),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(out_);
    manifest_["command"] = command_;
    manifest_["outputs"] = json::array();
    manifest_["input_digests"] = json::object();
  }

  json& manifest() { return manifest_; }

  void note_input(const fs::path& path) {
    manifest_["input_digests"][path.filename().string()] = file_digest(path);
  }
  void note_output(const std::string& name) {
    manifest_["outputs"].push_back(name);
  }

  int finish(int code, const std::string& error = "") {
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start_)
                      .count();
    manifest_["wall_time_s"] = secs;
    if (!error.empty()) manifest_["error"] = error;
    write_json(out_ / "manifest.json", manifest_);
    if (!error.empty()) std::cerr << command_ << ": " << error << "\n";
    return code;
  }

  template <typename Body>
  int run(Body&& body) {
    try {
      body();
      return finish(0);
    } catch (const InternalError& e) {
      return finish(1, e.what());
    } catch (const Error& e) {
      return finish(2, e.what());
    } catch (const std::exception& e) {
      return finish(1, e.what());
    }
  }

 private:
  std::string command_;
  fs::path out_;
  std::chrono::steady_clock::time_point start_;
  json manifest_;
};

}  // namespace

void write_trace_artifacts(const fs::path& dir, const Trace& trace) {
  {
    std::ostringstream out;
    out << "sweep,log_posterior,g,n_included,pi\n";
    for (const auto& rec : trace.records)
      out << rec.sweep << ',' << fmt17(rec.log_posterior) << ',' << rec.g << ','
          << rec.n_included << ',' << fmt17(rec.pi) << '\n';
    write_file(dir / "trace.csv", out.str());
  }
  {
    std::ostringstream out;
    for (int m = 0; m < trace.n_vars; ++m) out << (m ? "," : "") << 'v' << (m + 1);
    out << '\n';
    for (size_t t = 0; t < trace.size(); ++t) {
      auto mask = trace.mask(t);
      for (int m = 0; m < trace.n_vars; ++m)
        out << (m ? "," : "") << static_cast<int>(mask[m]);
      out << '\n';
    }
    write_file(dir / "inclusion.csv", out.str());
  }
  if (trace.has_z) {
    std::ostringstream out;
    for (size_t t = 0; t < trace.size(); ++t) {
      auto z = trace.z_at(t);
      for (int n = 0; n < trace.n_items; ++n)
        out << (n ? "," : "") << (z[n] + 1);
      out << '\n';
    }
    write_file(dir / "z.csv", out.str());
  }
}

Trace read_trace_artifacts(const fs::path& dir) {
  Trace trace;
  std::ifstream tr(dir / "trace.csv");
  if (!tr) throw ParseError("cannot open trace file: " + (dir / "trace.csv").string());
  std::string line;
  if (!std::getline(tr, line) || line.rfind("sweep,", 0) != 0)
    throw ParseError("trace.csv: missing or malformed header");
  int lineno = 1;
  while (std::getline(tr, line)) {
    ++lineno;
    if (line.empty()) continue;
    TraceRecord rec{};
    char* end = nullptr;
    const char* p = line.c_str();
    rec.sweep = std::strtoll(p, &end, 10);
    if (end == p || *end != ',') throw ParseError("trace.csv: bad row at line " + std::to_string(lineno));
    p = end + 1;
    rec.log_posterior = std::strtod(p, &end);
    if (end == p || *end != ',') throw ParseError("trace.csv: bad row at line " + std::to_string(lineno));
    p = end + 1;
    rec.g = static_cast<int>(std::strtol(p, &end, 10));
    if (end == p || *end != ',') throw ParseError("trace.csv: bad row at line " + std::to_string(lineno));
    p = end + 1;
    rec.n_included = static_cast<int>(std::strtol(p, &end, 10));
    if (end == p || *end != ',') throw ParseError("trace.csv: bad row at line " + std::to_string(lineno));
    p = end + 1;
    rec.pi = std::strtod(p, &end);
    if (end == p) throw ParseError("trace.csv: bad row at line " + std::to_string(lineno));
    trace.records.push_back(rec);
  }
  if (trace.records.empty()) throw ParseError("trace.csv: no retained sweeps");

  std::ifstream inc(dir / "inclusion.csv");
  if (!inc) throw ParseError("cannot open inclusion file: " + (dir / "inclusion.csv").string());
  if (!std::getline(inc, line)) throw ParseError("inclusion.csv: empty file");
  trace.n_vars = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
  size_t rows = 0;
  while (std::getline(inc, line)) {
    if (line.empty()) continue;
    ++rows;
    int m = 0;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == ',') continue;
      if (line[i] == '\r') continue;
      if (line[i] != '0' && line[i] != '1')
        throw ParseError("inclusion.csv: expected 0/1 entries");
      trace.masks.push_back(line[i] - '0');
      ++m;
    }
    if (m != trace.n_vars) throw ParseError("inclusion.csv: ragged row");
  }
  if (rows != trace.records.size())
    throw ParseError("inclusion.csv: row count does not match trace.csv");
  return trace;
}

void write_summary_artifacts(const fs::path& dir, const Trace& trace, int g_max) {
  auto gp = summaries::group_posterior(trace, g_max);
  {
    json j;
    j["modal_g"] = gp.modal_g();
    json p = json::object();
    for (int k = 1; k <= g_max; ++k) p[std::to_string(k)] = gp.p[k - 1];
    j["p"] = p;
    write_json(dir / "gprobs.json", j);
  }
  {
    auto cm = summaries::coincidence(trace, g_max);
    std::ostringstream out;
    out << "k";
    for (int m = 0; m < trace.n_vars; ++m) out << ",v" << (m + 1);
    out << '\n';
    for (int k = 1; k <= g_max; ++k) {
      out << k;
      for (int m = 0; m < trace.n_vars; ++m) {
        out << ',';
        if (cm.visited[k - 1]) out << fmt17(cm.at(k, m));
      }
      out << '\n';
    }
    write_file(dir / "coincidence.csv", out.str());
  }
  {
    json j;
    j["acceptance"] = accepts_to_json(trace.accepts);
    j["inclusion_probability"] = summaries::inclusion_probability(trace);
    if (trace.records.size() >= 10) {
      std::vector<double> lp;
      lp.reserve(trace.size());
      for (const auto& rec : trace.records) lp.push_back(rec.log_posterior);
      auto diag = summaries::autocorr_ess(lp, 50);
      j["acf"] = diag.acf;
      j["ess"] = diag.ess;
      j["degenerate"] = diag.degenerate;
    } else {
      j["acf"] = json::array();
      j["ess"] = nullptr;
      j["degenerate"] = nullptr;
    }
    write_json(dir / "diagnostics.json", j);
  }
}

void write_params_json(const fs::path& path,
                       const posthoc::ParameterEstimates& est) {
  json theta = json::object();
  json tau = json::object();
  for (int h = 0; h < est.g; ++h) {
    std::string gk = std::to_string(h + 1);
    json vars = json::object();
    for (size_t vi = 0; vi < est.variables.size(); ++vi) {
      json cats = json::object();
      for (int c = 1; c <= est.categories[vi]; ++c) {
        json cell;
        cell["mean"] = est.theta(h, static_cast<int>(vi), c);
        cell["sd"] = est.theta_stddev(h, static_cast<int>(vi), c);
        cats[std::to_string(c)] = cell;
      }
      vars[std::to_string(est.variables[vi] + 1)] = cats;
    }
    theta[gk] = vars;
    json tcell;
    tcell["tau_mean"] = est.tau_mean[h];
    tcell["tau_sd"] = est.tau_sd[h];
    tau[gk] = tcell;
  }
  json j;
  j["g"] = est.g;
  json vlist = json::array();
  for (int v : est.variables) vlist.push_back(v + 1);
  j["variables"] = vlist;
  j["theta"] = theta;
  j["tau"] = tau;
  write_json(path, j);
}

void write_clustering_csv(const fs::path& path,
                          const posthoc::ModalClustering& mc) {
  std::ostringstream out;
  out << "item,modal_group,max_probability\n";
  for (size_t n = 0; n < mc.assignment.size(); ++n)
    out << (n + 1) << ',' << (mc.assignment[n] + 1) << ','
        << fmt17(mc.probability[n]) << '\n';
  write_file(path, out.str());
}

int cmd_simulate(const SimulateArgs& args) {
  CommandRun run("simulate", args.out);
  return run.run([&] {
    auto spec = simulate::builtin_spec(args.spec_name, args.n_items);
    auto labeled = simulate::generate(spec, args.seed);
    run.manifest()["seed"] = args.seed;
    run.manifest()["spec"] = args.spec_name;

    save_csv(labeled.data, args.out / "data.csv", true);
    run.note_output("data.csv");
    {
      std::ostringstream out;
      for (int t : labeled.truth) out << (t + 1) << '\n';
      write_file(args.out / "truth.csv", out.str());
      run.note_output("truth.csv");
    }
    {
      std::ostringstream out;
      for (int t : labeled.oracle) out << (t + 1) << '\n';
      write_file(args.out / "oracle.csv", out.str());
      run.note_output("oracle.csv");
    }
    {
      json j;
      j["name"] = args.spec_name;
      j["g"] = spec.g;
      j["n_items"] = spec.n_items;
      j["categories"] = spec.categories;
      j["weights"] = spec.weights;
      json theta = json::array();
      for (int cls = 0; cls < spec.g; ++cls) {
        json per_var = json::array();
        for (int m = 0; m < spec.n_vars(); ++m) {
          json probs = json::array();
          for (int c = 1; c <= spec.categories[m]; ++c)
            probs.push_back(spec.prob(cls, m, c));
          per_var.push_back(probs);
        }
        theta.push_back(per_var);
      }
      j["theta"] = theta;
      write_json(args.out / "spec.json", j);
      run.note_output("spec.json");
    }
  });
}

namespace {

// Pool retained records and masks of several chains into one trace for the
// cross-chain summary files.
Trace pool_traces(const std::vector<Trace>& chains) {
  Trace pooled;
  pooled.n_vars = chains.front().n_vars;
  for (const auto& tr : chains) {
    pooled.records.insert(pooled.records.end(), tr.records.begin(), tr.records.end());
    pooled.masks.insert(pooled.masks.end(), tr.masks.begin(), tr.masks.end());
    pooled.accepts.eject_proposed += tr.accepts.eject_proposed;
    pooled.accepts.eject_accepted += tr.accepts.eject_accepted;
    pooled.accepts.absorb_proposed += tr.accepts.absorb_proposed;
    pooled.accepts.absorb_accepted += tr.accepts.absorb_accepted;
    pooled.accepts.include_proposed += tr.accepts.include_proposed;
    pooled.accepts.include_accepted += tr.accepts.include_accepted;
    pooled.accepts.exclude_proposed += tr.accepts.exclude_proposed;
    pooled.accepts.exclude_accepted += tr.accepts.exclude_accepted;
  }
  return pooled;
}

}  // namespace

int cmd_fit(const FitArgs& args) {
  CommandRun run("fit", args.out);
  return run.run([&] {
    AppConfig cfg = load_app_config(args.config);
    if (args.seed) cfg.run.seed = *args.seed;
    if (args.config) {
      run.note_input(*args.config);
      run.manifest()["config_digest"] = file_digest(*args.config);
    }
    run.note_input(args.data);
    if (args.chains < 1) throw ValidationError("chains: must be at least 1");

    auto data = load_dataset(args.data, cfg.categories);
    if (!cfg.g_max_explicit) cfg.priors.g_max = std::min(30, data.n_items());
    validate_config(cfg.run, cfg.priors, data);
    run.manifest()["seed"] = cfg.run.seed;
    run.manifest()["config"] = config_to_json(cfg);

    std::vector<Trace> traces(args.chains);
    {
      std::vector<std::future<Trace>> futures;
      for (int c = 0; c < args.chains; ++c)
        futures.push_back(std::async(std::launch::async, [&, c] {
          SamplerOptions opts;
          opts.rng_stream = static_cast<uint64_t>(c);
          return sampler::run(data, cfg.priors, cfg.run, cfg.moves, opts);
        }));
      for (int c = 0; c < args.chains; ++c) traces[c] = futures[c].get();
    }

    if (args.chains == 1) {
      write_trace_artifacts(args.out, traces[0]);
      write_summary_artifacts(args.out, traces[0], cfg.priors.g_max);
      run.note_output("trace.csv");
      run.note_output("inclusion.csv");
      if (traces[0].has_z) run.note_output("z.csv");
    } else {
      for (int c = 0; c < args.chains; ++c) {
        fs::path sub = args.out / ("chain_" + std::to_string(c + 1));
        fs::create_directories(sub);
        write_trace_artifacts(sub, traces[c]);
        write_summary_artifacts(sub, traces[c], cfg.priors.g_max);
        run.note_output("chain_" + std::to_string(c + 1) + "/trace.csv");
      }
      Trace pooled = pool_traces(traces);
      write_summary_artifacts(args.out, pooled, cfg.priors.g_max);
    }
    run.note_output("gprobs.json");
    run.note_output("coincidence.csv");
    run.note_output("diagnostics.json");
    run.manifest()["acceptance"] =
        accepts_to_json(args.chains == 1 ? traces[0].accepts
                                         : pool_traces(traces).accepts);
    run.manifest()["chains"] = args.chains;
  });
}

namespace {

// Modal G from gprobs.json plus the variables whose conditional inclusion
// probability at that G exceeds one half.
std::pair<int, std::vector<int>> modal_model_from_fit(const fs::path& fit_dir) {
  json gj;
  try {
    gj = json::parse(read_file(fit_dir / "gprobs.json"));
  } catch (const json::exception& e) {
    throw ParseError("gprobs.json: " + std::string(e.what()));
  }
  int modal_g = gj.at("modal_g").get<int>();

  std::ifstream inc(fit_dir / "coincidence.csv");
  if (!inc)
    throw ParseError("cannot open " + (fit_dir / "coincidence.csv").string());
  std::string line;
  std::getline(inc, line);  // header
  std::vector<int> vars;
  while (std::getline(inc, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    if (std::stoi(field) != modal_g) continue;
    int m = 0;
    while (std::getline(ss, field, ',')) {
      if (!field.empty() && std::stod(field) > 0.5) vars.push_back(m);
      ++m;
    }
    return {modal_g, vars};
  }
  throw ParseError("coincidence.csv: no row for modal G");
}

}  // namespace

int cmd_posthoc(const PosthocArgs& args) {
  CommandRun run("posthoc", args.out);
  return run.run([&] {
    AppConfig cfg = load_app_config(args.config);
    if (args.seed) cfg.run.seed = *args.seed;
    if (args.config) run.note_input(*args.config);
    run.note_input(args.data);

    auto data = load_dataset(args.data, cfg.categories);
    if (!cfg.g_max_explicit) cfg.priors.g_max = std::min(30, data.n_items());

    int g;
    std::vector<int> vars0;  // 0-based
    if (args.g) {
      g = *args.g;
      if (args.variables.empty())
        throw ValidationError("variables: explicit G needs --vars");
      for (int v : args.variables) {
        if (v < 1 || v > data.n_vars())
          throw ValidationError("variables: index " + std::to_string(v) +
                                " outside 1.." + std::to_string(data.n_vars()));
        vars0.push_back(v - 1);
      }
    } else if (args.fit_dir) {
      std::tie(g, vars0) = modal_model_from_fit(*args.fit_dir);
    } else {
      throw ValidationError("posthoc needs either --fit or explicit --g/--vars");
    }
    if (g < 1 || g > cfg.priors.g_max)
      throw ValidationError("g: value " + std::to_string(g) +
                            " outside 1..g_max");

    RunConfig aux = cfg.run;
    aux.initial_g = g;
    bool emit_z = aux.store_z;
    aux.store_z = true;
    validate_config(aux, cfg.priors, data);
    run.manifest()["seed"] = aux.seed;
    run.manifest()["g"] = g;
    {
      json v = json::array();
      for (int m : vars0) v.push_back(m + 1);
      run.manifest()["variables"] = v;
    }
    AppConfig resolved = cfg;
    resolved.run = aux;
    run.manifest()["config"] = config_to_json(resolved);

    SamplerOptions opts;
    opts.g_moves = false;
    opts.var_moves = false;
    opts.snapshots = true;
    opts.initial_mask = InclusionPartition::from_indices(data.n_vars(), vars0);
    Trace trace = sampler::run(data, cfg.priors, aux, cfg.moves, opts);

    relabel::relabel_trace(trace);
    auto est = posthoc::estimate(trace, cfg.priors);
    auto mc = posthoc::modal_clustering(trace);

    write_params_json(args.out / "params.json", est);
    run.note_output("params.json");
    write_clustering_csv(args.out / "clustering.csv", mc);
    run.note_output("clustering.csv");
    if (emit_z) {
      write_trace_artifacts(args.out, trace);
      run.note_output("z.csv");
    }
    run.manifest()["acceptance"] = accepts_to_json(trace.accepts);
  });
}

int cmd_summarize(const SummarizeArgs& args) {
  CommandRun run("summarize", args.out);
  return run.run([&] {
    json manifest;
    try {
      manifest = json::parse(read_file(args.trace_dir / "manifest.json"));
    } catch (const json::exception& e) {
      throw ParseError("manifest.json: " + std::string(e.what()));
    }
    run.note_input(args.trace_dir / "trace.csv");
    Trace trace = read_trace_artifacts(args.trace_dir);
    trace.accepts = accepts_from_json(manifest.at("acceptance"));
    int g_max = manifest.at("config").at("g_max").get<int>();

    write_summary_artifacts(args.out, trace, g_max);
    run.note_output("gprobs.json");
    run.note_output("coincidence.csv");
    run.note_output("diagnostics.json");
  });
}

int cmd_rjmcmc(const RjmcmcArgs& args) {
  CommandRun run("rjmcmc", args.out);
  return run.run([&] {
    AppConfig cfg = load_app_config(args.config);
    if (args.seed) cfg.run.seed = *args.seed;
    if (args.config) run.note_input(*args.config);
    run.note_input(args.data);

    auto data = load_dataset(args.data, cfg.categories);
    if (!cfg.g_max_explicit) cfg.priors.g_max = std::min(30, data.n_items());
    validate_config(cfg.run, cfg.priors, data);
    run.manifest()["seed"] = cfg.run.seed;
    run.manifest()["g"] = args.g;
    run.manifest()["epsilon"] = args.epsilon;
    run.manifest()["config"] = config_to_json(cfg);

    rjmcmc::RunOptions opts;
    if (!args.freeze_variables.empty()) {
      opts.rj_moves = false;
      std::vector<int> vars0;
      for (int v : args.freeze_variables) {
        if (v < 1 || v > data.n_vars())
          throw ValidationError("freeze: index " + std::to_string(v) +
                                " outside 1.." + std::to_string(data.n_vars()));
        vars0.push_back(v - 1);
      }
      opts.initial_mask = InclusionPartition::from_indices(data.n_vars(), vars0);
    }
    auto res = rjmcmc::run_fixed_g(data, cfg.priors, cfg.run, args.g,
                                   args.epsilon, opts);

    write_trace_artifacts(args.out, res.trace);
    run.note_output("trace.csv");
    run.note_output("inclusion.csv");
    write_params_json(args.out / "params.json", res.estimates);
    run.note_output("params.json");
    write_clustering_csv(args.out / "clustering.csv", res.clustering);
    run.note_output("clustering.csv");
    {
      json j;
      j["inclusion_probability"] = res.inclusion_prob;
      j["rj_proposed"] = res.rj_proposed;
      j["rj_accepted"] = res.rj_accepted;
      j["rj_rate"] = res.rj_proposed > 0
                         ? static_cast<double>(res.rj_accepted) / res.rj_proposed
                         : 0.0;
      write_json(args.out / "rj_summary.json", j);
      run.note_output("rj_summary.json");
    }
    run.manifest()["acceptance"] = accepts_to_json(res.trace.accepts);
  });
}

}  // namespace lcavs::commands
