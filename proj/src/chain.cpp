#include "bnnlp/chain.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>

#include "bnnlp/errors.hpp"
#include "bnnlp/hmc.hpp"
#include "bnnlp/indicators.hpp"
#include "bnnlp/linear_block.hpp"

namespace bnnlp {

void ChainConfig::validate() const {
  if (n_iter < 1) throw ConfigError("ChainConfig: n_iter must be >= 1");
  if (n_burn < 0 || n_burn >= n_iter) throw ConfigError("ChainConfig: need 0 <= n_burn < n_iter");
  if (!(hmc_step_size > 0.0)) throw ConfigError("ChainConfig: hmc_step_size must be > 0");
  if (hmc_n_steps < 1) throw ConfigError("ChainConfig: hmc_n_steps must be >= 1");
  if (!(hmc_target_accept > 0.0 && hmc_target_accept < 1.0))
    throw ConfigError("ChainConfig: hmc_target_accept must lie in (0, 1)");
}

int ShockSlotFeed::num_draws() const {
  if (sources.empty()) return 0;
  Eigen::Index n = sources.front()->rows();
  for (const auto& s : sources) n = std::min(n, s->rows());
  return static_cast<int>(n);
}

void ShockSlotFeed::fill(int draw, Eigen::MatrixXd& X) const {
  for (int s = 0; s < num_slots(); ++s) {
    const auto& src = *sources[s];
    if (src.cols() < X.rows()) throw InvalidInput("ShockSlotFeed: residual source shorter than the design");
    X.col(first_column + s) = src.row(draw).head(X.rows()).transpose();
  }
}

int feed_draw_for_iteration(int iter, const ChainConfig& cfg, int available_draws) {
  if (available_draws <= 0) throw InvalidInput("ShockSlotFeed: no stored draws");
  if (iter >= cfg.n_burn) {
    const int j = iter - cfg.n_burn;
    if (j >= available_draws) throw InvalidInput("ShockSlotFeed: fewer stored draws than retained iterations");
    return j;
  }
  return iter % available_draws;
}

NetworkParamsd initial_params(const NetworkShape& shape, bool network_enabled, Rng& rng) {
  auto p = NetworkParamsd::zeros(shape);
  for (int l = 0; l < shape.num_hidden_layers(); ++l)
    for (int q = 0; q < shape.hidden[l]; ++q)
      p.mixture.set_indicator(l, q, activation_from_index(std::uniform_int_distribution<int>(0, 3)(rng)));
  if (!network_enabled) return p;
  for (auto& W : p.weights)
    for (Eigen::Index i = 0; i < W.size(); ++i) W.data()[i] = 0.1 * draw_normal(rng);
  for (auto& b : p.biases)
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = 0.1 * draw_normal(rng);
  return p;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double sample_variance(const Eigen::VectorXd& y) {
  if (y.size() < 2) return 1.0;
  const double m = y.mean();
  return (y.array() - m).square().sum() / static_cast<double>(y.size() - 1);
}

}  // namespace

ChainOutput run_chain(const Eigen::VectorXd& y, const Eigen::MatrixXd& X_in, const NetworkShape& shape,
                      const ChainConfig& cfg, const ShockSlotFeed* feed) {
  cfg.validate();
  shape.validate();
  if (X_in.rows() != y.size()) throw InvalidInput("run_chain: rows of X != length of y");
  if (X_in.cols() != shape.input_dim) throw InvalidInput("run_chain: columns of X != network input dimension");
  if (y.size() == 0) throw InvalidInput("run_chain: empty sample");
  if (feed && feed->first_column + feed->num_slots() > X_in.cols())
    throw InvalidInput("run_chain: shock slots exceed the design width");

  Rng rng(cfg.seed);
  Eigen::MatrixXd X = X_in;
  const Eigen::Index T = y.size();
  const int L = shape.num_hidden_layers();
  const int K = shape.input_dim;
  const int feed_draws = feed ? feed->num_draws() : 0;

  NetworkParamsd params = initial_params(shape, cfg.network_enabled, rng);
  HorseshoeState scales = HorseshoeState::ones(shape);
  SvState sv = SvState::constant(T, sample_variance(y));
  double step_size = cfg.hmc_step_size;
  double log_step = std::log(step_size);

  ChainOutput out;
  out.shape = shape;
  out.config = cfg;
  out.params.reserve(cfg.n_keep());
  out.scales.reserve(cfg.n_keep());
  out.sv.reserve(cfg.n_keep());
  out.residuals.resize(cfg.n_keep(), T);
  auto& diag = out.diagnostics;

  for (int iter = 0; iter < cfg.n_iter; ++iter) {
    try {
      if (feed && feed->num_slots() > 0) feed->fill(feed_draw_for_iteration(iter, cfg, feed_draws), X);

      auto t0 = Clock::now();
      if (cfg.network_enabled) {
        const auto fwd = forward_batch(params, X);
        const Eigen::MatrixXd hidden = fwd.post[L - 1].transpose();
        const Eigen::VectorXd coef = draw_linear_and_output(y, X, hidden, scales, sv, rng);
        params.linear_coef = coef.head(K);
        params.weights[L].row(0) = coef.tail(hidden.cols()).transpose();
      } else {
        params.linear_coef = draw_linear_and_output(y, X, Eigen::MatrixXd(T, 0), scales, sv, rng);
      }
      diag.seconds_linear += seconds_since(t0);

      if (cfg.network_enabled) {
        t0 = Clock::now();
        const HmcStep step = hmc_update_inner(params, y, X, scales, sv, step_size, cfg.hmc_n_steps, rng);
        if (step.divergent) ++diag.divergences;
        if (iter >= cfg.n_burn) {
          ++diag.hmc_proposals;
          if (step.accepted) ++diag.hmc_accepted;
        } else if (cfg.hmc_adapt) {
          const double gain = 1.0 / std::pow(static_cast<double>(iter) + 10.0, 0.6);
          log_step += 2.0 * gain * (step.accept_prob - cfg.hmc_target_accept);
          log_step = std::clamp(log_step, std::log(1e-6), std::log(1.0));
          step_size = std::exp(log_step);
        }
        diag.seconds_hmc += seconds_since(t0);
      }

      t0 = Clock::now();
      diag.scale_clamps += horseshoe_update(params, scales, rng, cfg.network_enabled);
      diag.seconds_horseshoe += seconds_since(t0);

      if (cfg.network_enabled) {
        t0 = Clock::now();
        draw_activation_indicators(params, y, X, sv, rng);
        diag.seconds_indicators += seconds_since(t0);
      }

      t0 = Clock::now();
      Eigen::VectorXd resid = y - X * params.linear_coef;
      if (cfg.network_enabled) resid -= forward_batch(params, X).f;
      diag.sv_accepted += sv_update(resid, sv, cfg.sv_enabled, rng);
      diag.seconds_sv += seconds_since(t0);

      if (!params.all_finite() || !resid.allFinite())
        throw NumericError("non-finite parameters or residuals");

      if (iter >= cfg.n_burn) {
        const int j = iter - cfg.n_burn;
        out.residuals.row(j) = resid.transpose();
        out.params.push_back(params);
        out.scales.push_back(scales);
        out.sv.push_back(sv);
      }
    } catch (const NumericError& e) {
      throw NumericError("run_chain: iteration " + std::to_string(iter) + ": " + e.what());
    }
  }

  diag.final_step_size = step_size;
  if (diag.scale_clamps > 0)
    std::clog << "warning: " << diag.scale_clamps << " horseshoe scale draws clamped to [1e-12, 1e12]\n";
  return out;
}

}  // namespace bnnlp
