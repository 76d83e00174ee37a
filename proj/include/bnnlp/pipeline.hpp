#ifndef BNNLP_PIPELINE_HPP
#define BNNLP_PIPELINE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "bnnlp/io.hpp"
#include "bnnlp/nlp.hpp"

namespace bnnlp {

struct TargetResult {
  std::string variable;
  NlpResult nlp;
  std::vector<ChainDiagnostics> diagnostics;  // per horizon
};

struct PipelineResult {
  Panel panel;
  VarFit var;
  ShockSeries shock;
  std::vector<TargetResult> targets;
  std::string input_hash;
};

/// Stage 1: load and transform the panel, fit the VAR, extract the shock to
/// the first-ordered variable.
struct ShockStage {
  Panel panel;
  VarFit var;
  ShockSeries shock;
};
ShockStage identify_shock(const RunConfig& cfg);

/// Full run: shock identification, then per target the sequential horizon
/// chains and the unconditional NLP. Targets run concurrently when
/// cfg.threads > 1; results do not depend on the thread count. Errors keep
/// their type and gain a stage label.
PipelineResult run_pipeline(const RunConfig& cfg);

/// Long-form table: one row per (horizon, tau) with the 16/50/84 posterior
/// quantiles and the same quantiles after division by tau (0 for tau = 0).
std::string results_csv(const std::string& variable, const NlpResult& result);

/// Writes <dir>/<variable>.csv.
std::filesystem::path serialize_results(const TargetResult& target, const std::filesystem::path& dir);

nlohmann::json run_manifest(const RunConfig& cfg, const PipelineResult& result,
                            const std::vector<std::string>& outputs);

/// Writes every result CSV and manifest.json into `dir` (created if needed)
/// and returns the written paths.
std::vector<std::filesystem::path> write_outputs(const RunConfig& cfg, const PipelineResult& result,
                                                 const std::filesystem::path& dir);

/// Writes <dir>/shocks.csv with columns date,shock.
std::filesystem::path write_shocks(const ShockSeries& shock, const std::filesystem::path& dir);

}  // namespace bnnlp

#endif  // BNNLP_PIPELINE_HPP
