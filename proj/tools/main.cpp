#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "bnnlp/errors.hpp"
#include "bnnlp/io.hpp"
#include "bnnlp/pipeline.hpp"
#include "bnnlp/synth.hpp"

namespace fs = std::filesystem;
using namespace bnnlp;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Options& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "JSON configuration file");
  if (config_required) c->required();
  cmd->add_option("--seed", o.seed, "Override the random seed");
  cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output directory");
}

RunConfig resolve_run_config(const Options& o) {
  RunConfig cfg = load_run_config(o.config);
  if (o.seed) cfg.chain.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  if (o.out) cfg.output_dir = *o.out;
  cfg.validate();
  return cfg;
}

int cmd_run(const Options& o) {
  const RunConfig cfg = resolve_run_config(o);
  const PipelineResult res = run_pipeline(cfg);
  for (const auto& t : res.targets)
    for (std::size_t h = 0; h < t.diagnostics.size(); ++h)
      if (t.diagnostics[h].acceptance_out_of_range())
        std::cerr << "warning: " << t.variable << " horizon " << h << ": HMC acceptance "
                  << t.diagnostics[h].acceptance_rate() << " outside [0.4, 0.95]\n";
  for (const auto& p : write_outputs(cfg, res, cfg.output_dir)) std::cout << p.string() << "\n";
  return kExitOk;
}

int cmd_shocks(const Options& o) {
  const RunConfig cfg = resolve_run_config(o);
  const ShockStage s = identify_shock(cfg);
  std::cout << write_shocks(s.shock, cfg.output_dir).string() << "\n";
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  DgpSpec spec;
  if (!o.config.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(o.config));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("simulation config '" + o.config + "' is not valid JSON: " + e.what());
    } catch (const IoError& e) {
      throw ConfigError(e.what());
    }
    spec = dgp_spec_from_json(j);
  }
  if (o.seed) spec.seed = *o.seed;
  try {
    spec.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = o.out.value_or("simulated");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  const SynthData data = generate(spec);
  write_panel_csv(Panel{data.panel, data.names, data.dates}, dir / "panel.csv");

  RunConfig run;
  run.dataset.csv_path = "panel.csv";
  run.dataset.variable_order = data.names;
  for (const auto& n : data.names) run.dataset.transforms[n] = Transform::Level;
  run.dataset.sample_start = data.dates.front();
  run.dataset.sample_end = data.dates.back();
  run.targets = {data.names.back()};
  run.output_dir = "results";
  run.chain.seed = spec.seed;
  write_file(dir / "run_config.json", to_json(run).dump(2) + "\n");

  std::string truth = "variable,horizon,tau,value\n";
  for (int h = 0; h <= run.horizon; ++h)
    for (double tau : run.taus)
      truth += data.names.back() + "," + std::to_string(h) + "," + format_double(tau) + "," +
               format_double(data.ground_truth_nlp(h, tau)) + "\n";
  write_file(dir / "truth.csv", truth);

  nlohmann::json manifest = {{"simulation", to_json(spec)}};
  write_file(dir / "simulation.json", manifest.dump(2) + "\n");
  for (const char* f : {"panel.csv", "truth.csv", "run_config.json", "simulation.json"})
    std::cout << (dir / f).string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian neural network local projections"};
  app.require_subcommand(1);
  Options run_opts, sim_opts, shock_opts;
  auto* run = app.add_subcommand("run", "Estimate nonlinear local projections from a data file");
  add_common(run, run_opts, true);
  auto* sim = app.add_subcommand("simulate", "Write a synthetic panel with known responses");
  add_common(sim, sim_opts, false);
  auto* shocks = app.add_subcommand("shocks", "Identify the structural shock and write it as CSV");
  add_common(shocks, shock_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (sim->parsed()) return cmd_simulate(sim_opts);
    if (shocks->parsed()) return cmd_shocks(shock_opts);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    const char* label = code == kExitConfig ? "config error" : code == kExitData ? "data error"
                        : code == kExitNumeric ? "numeric error" : "error";
    std::cerr << label << ": " << e.what() << "\n";
    return code;
  }
  return kExitFailure;
}
