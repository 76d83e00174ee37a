#include "bnnlp/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

#include "bnnlp/errors.hpp"
#include "bnnlp/rng.hpp"

namespace bnnlp {

namespace {

constexpr std::uint64_t kNlpStream = 0x6e6c70;

// Runs `fn`, prefixing any library error with the stage name while keeping its type.
template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(stage + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(stage + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(stage + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(stage + ": " + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(stage + ": " + e.what());
  }
}

Eigen::Index target_position(const RunConfig& cfg, const std::string& name) {
  const auto& order = cfg.dataset.variable_order;
  return std::find(order.begin(), order.end(), name) - order.begin();
}

TargetResult run_target(const RunConfig& cfg, const ShockStage& s, const std::string& name, int nlp_threads) {
  const Eigen::Index col = target_position(cfg, name);
  const std::string label = "target " + name;
  const LpInputs in = in_stage(label + " / lp data", [&] {
    return align_lp_inputs(s.panel.values, s.panel.values.col(col), s.shock, cfg.lp_lags);
  });
  ChainConfig chain = cfg.chain;
  chain.seed = derive_seed(cfg.chain.seed, {static_cast<std::uint64_t>(col)});
  const SequentialFit fit = in_stage(label + " / estimation", [&] {
    return estimate_sequential(in.y, in.zeta, in.covariates, cfg.horizon, chain, cfg.network);
  });
  NlpOptions opts;
  opts.taus = cfg.taus;
  opts.paths = cfg.paths;
  opts.seed = derive_seed(cfg.chain.seed, {kNlpStream, static_cast<std::uint64_t>(col)});
  opts.threads = nlp_threads;
  TargetResult r;
  r.variable = name;
  r.nlp = in_stage(label + " / nlp", [&] { return unconditional_nlp(fit, opts); });
  for (const auto& c : fit.chains) r.diagnostics.push_back(c.diagnostics);
  return r;
}

}  // namespace

ShockStage identify_shock(const RunConfig& cfg) {
  in_stage("config", [&] { cfg.validate(); });
  ShockStage s;
  s.panel = in_stage("load", [&] { return load_and_transform(cfg.dataset); });
  VarSpec spec = cfg.var;
  spec.variable_order = cfg.dataset.variable_order;
  s.var = in_stage("var", [&] { return fit_var_ols(s.panel.values, spec); });
  const std::vector<std::string> dates(s.panel.dates.begin() + spec.lags, s.panel.dates.end());
  s.shock = in_stage("shock", [&] { return extract_shock(s.var.residuals, s.var.sigma, dates); });
  return s;
}

PipelineResult run_pipeline(const RunConfig& cfg) {
  ShockStage s = identify_shock(cfg);
  PipelineResult out;
  out.input_hash = in_stage("load", [&] { return git_blob_hash(read_file(cfg.dataset.csv_path)); });

  const int n_targets = static_cast<int>(cfg.targets.size());
  const int parallel = std::max(1, std::min(cfg.threads, n_targets));
  const int nlp_threads = std::max(1, cfg.threads / parallel);
  out.targets.resize(static_cast<std::size_t>(n_targets));
  if (parallel == 1) {
    for (int i = 0; i < n_targets; ++i)
      out.targets[static_cast<std::size_t>(i)] = run_target(cfg, s, cfg.targets[static_cast<std::size_t>(i)], nlp_threads);
  } else {
    std::exception_ptr failure;
    std::mutex m;
    std::vector<std::thread> pool;
    for (int w = 0; w < parallel; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < n_targets; i += parallel) {
          try {
            out.targets[static_cast<std::size_t>(i)] =
                run_target(cfg, s, cfg.targets[static_cast<std::size_t>(i)], nlp_threads);
          } catch (...) {
            std::lock_guard<std::mutex> lock(m);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  out.panel = std::move(s.panel);
  out.var = std::move(s.var);
  out.shock = std::move(s.shock);
  return out;
}

std::string results_csv(const std::string& variable, const NlpResult& result) {
  std::vector<NlpResult> rescaled;
  for (double tau : result.taus) rescaled.push_back(tau == 0.0 ? result : rescale_for_comparison(result, tau));
  std::string s = "variable,horizon,tau,q16,q50,q84,rescaled_q16,rescaled_q50,rescaled_q84\n";
  for (int h = 0; h < result.num_horizons(); ++h) {
    for (int k = 0; k < result.num_taus(); ++k) {
      const double tau = result.taus[static_cast<std::size_t>(k)];
      const NlpBand b = result.band(h, k);
      const NlpBand r = tau == 0.0 ? NlpBand{} : rescaled[static_cast<std::size_t>(k)].band(h, k);
      s += variable + "," + std::to_string(h) + "," + format_double(tau) + "," + format_double(b.q16) + "," +
           format_double(b.q50) + "," + format_double(b.q84) + "," + format_double(r.q16) + "," +
           format_double(r.q50) + "," + format_double(r.q84) + "\n";
    }
  }
  return s;
}

std::filesystem::path serialize_results(const TargetResult& target, const std::filesystem::path& dir) {
  if (target.nlp.num_horizons() == 0 || target.nlp.num_draws() == 0)
    throw InvalidInput("serialize_results: empty result for '" + target.variable + "'");
  const std::filesystem::path path = dir / (target.variable + ".csv");
  write_file(path, results_csv(target.variable, target.nlp));
  return path;
}

nlohmann::json run_manifest(const RunConfig& cfg, const PipelineResult& result,
                            const std::vector<std::string>& outputs) {
  using nlohmann::json;
  json diag = json::object();
  for (const auto& t : result.targets) {
    json rows = json::array();
    for (std::size_t h = 0; h < t.diagnostics.size(); ++h) {
      const ChainDiagnostics& d = t.diagnostics[h];
      rows.push_back({{"horizon", h},
                      {"hmc_acceptance", d.acceptance_rate()},
                      {"hmc_acceptance_out_of_range", d.acceptance_out_of_range()},
                      {"hmc_divergences", d.divergences},
                      {"hmc_final_step_size", d.final_step_size},
                      {"scale_clamps", d.scale_clamps}});
    }
    diag[t.variable] = rows;
  }
  return {{"config", to_json(cfg)},
          {"seed", cfg.chain.seed},
          {"inputs", {{"data", {{"path", cfg.dataset.csv_path}, {"git_blob_sha1", result.input_hash}}}}},
          {"sample",
           {{"first", result.panel.dates.empty() ? "" : result.panel.dates.front()},
            {"last", result.panel.dates.empty() ? "" : result.panel.dates.back()},
            {"periods", result.panel.values.rows()},
            {"shock_variable", cfg.dataset.variable_order.front()},
            {"shock_periods", result.shock.zeta.size()}}},
          {"outputs", outputs},
          {"diagnostics", diag}};
}

std::vector<std::filesystem::path> write_outputs(const RunConfig& cfg, const PipelineResult& result,
                                                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> paths;
  std::vector<std::string> names;
  for (const auto& t : result.targets) {
    paths.push_back(serialize_results(t, dir));
    names.push_back(paths.back().filename().string());
  }
  const std::filesystem::path manifest = dir / "manifest.json";
  write_file(manifest, run_manifest(cfg, result, names).dump(2) + "\n");
  paths.push_back(manifest);
  return paths;
}

std::filesystem::path write_shocks(const ShockSeries& shock, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::string s = "date,shock\n";
  for (Eigen::Index t = 0; t < shock.zeta.size(); ++t) {
    s += (shock.time_index.empty() ? std::to_string(t) : shock.time_index[static_cast<std::size_t>(t)]) + "," +
         format_double(shock.zeta[t]) + "\n";
  }
  const std::filesystem::path path = dir / "shocks.csv";
  write_file(path, s);
  return path;
}

}  // namespace bnnlp
