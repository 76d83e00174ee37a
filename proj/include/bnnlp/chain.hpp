#ifndef BNNLP_CHAIN_HPP
#define BNNLP_CHAIN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "bnnlp/horseshoe.hpp"
#include "bnnlp/network.hpp"
#include "bnnlp/sv.hpp"

namespace bnnlp {

struct ChainConfig {
  int n_iter = 20000;
  int n_burn = 10000;
  double hmc_step_size = 0.01;
  int hmc_n_steps = 10;
  std::uint64_t seed = 42;
  bool sv_enabled = true;
  /// false fixes f = 0: no inner weights, no output layer, gamma only.
  bool network_enabled = true;
  /// Robbins-Monro tuning of the leapfrog step during burn-in only.
  bool hmc_adapt = true;
  double hmc_target_accept = 0.7;

  int n_keep() const { return n_iter - n_burn; }
  void validate() const;
  bool operator==(const ChainConfig&) const = default;
};

/// Source of the lagged-shock regressor columns of a horizon-h design.
///
/// `sources[s]` holds the stored residual draws of horizon s (draws x rows).
/// Column `first_column + s` of the design receives `sources[s](j, t)` for
/// every row t when draw j is active.
struct ShockSlotFeed {
  int first_column = 0;
  std::vector<std::shared_ptr<const Eigen::MatrixXd>> sources;

  int num_slots() const { return static_cast<int>(sources.size()); }
  int num_draws() const;
  void fill(int draw, Eigen::MatrixXd& X) const;
};

/// Draw index of the feed used at MCMC iteration `iter`: retained iteration
/// j uses draw j, burn-in iterations cycle through the available draws.
int feed_draw_for_iteration(int iter, const ChainConfig& cfg, int available_draws);

struct ChainDiagnostics {
  int hmc_proposals = 0;   // post burn-in
  int hmc_accepted = 0;    // post burn-in
  int divergences = 0;     // whole chain
  double final_step_size = 0.0;
  int scale_clamps = 0;
  int sv_accepted = 0;
  /// Wall-clock seconds per block; not part of the deterministic output.
  double seconds_linear = 0.0, seconds_hmc = 0.0, seconds_horseshoe = 0.0, seconds_indicators = 0.0,
         seconds_sv = 0.0;

  double acceptance_rate() const {
    return hmc_proposals > 0 ? static_cast<double>(hmc_accepted) / hmc_proposals : 0.0;
  }
  /// Flags an acceptance rate outside [0.4, 0.95].
  bool acceptance_out_of_range() const {
    return hmc_proposals > 0 && (acceptance_rate() < 0.4 || acceptance_rate() > 0.95);
  }
};

/// Retained post burn-in draws of one BNN regression.
struct ChainOutput {
  NetworkShape shape;
  ChainConfig config;
  std::vector<NetworkParamsd> params;
  std::vector<HorseshoeState> scales;
  std::vector<SvState> sv;
  /// residuals(j, t) = y_t - predict_mean(params[j], x_t), draws x rows.
  Eigen::MatrixXd residuals;
  ChainDiagnostics diagnostics;

  int n_draws() const { return static_cast<int>(params.size()); }
};

/// Multi-block sampler. Each iteration runs, in order: the Gaussian draw of
/// (gamma, W_{L+1}); one HMC proposal for W_1..W_L and biases; a horseshoe
/// sweep over every block; the activation indicator sweep; the volatility
/// block. With `feed`, the lagged-shock columns of X are refreshed before
/// every iteration.
ChainOutput run_chain(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const NetworkShape& shape,
                      const ChainConfig& cfg, const ShockSlotFeed* feed = nullptr);

/// Initial state: gamma = 0, inner and output weights ~ N(0, 0.1^2), all
/// scales 1, h_t = log var(y), indicators uniform.
NetworkParamsd initial_params(const NetworkShape& shape, bool network_enabled, Rng& rng);

}  // namespace bnnlp

#endif  // BNNLP_CHAIN_HPP
