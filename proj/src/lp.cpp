#include "bnnlp/lp.hpp"

#include <algorithm>

#include "bnnlp/errors.hpp"
#include "bnnlp/rng.hpp"

namespace bnnlp {

Eigen::MatrixXd LpDataset::design() const {
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(rows(), num_regressors());
  Z.col(0) = instrument;
  Z.middleCols(1, covariates.cols()) = covariates;
  return Z;
}

Eigen::MatrixXd lagged_covariates(const Eigen::Ref<const Eigen::MatrixXd>& panel, int lags, bool add_constant) {
  if (lags < 0) throw InvalidInput("lagged_covariates: negative lag count");
  const Eigen::Index T = panel.rows();
  const Eigen::Index N = panel.cols();
  if (T <= lags) throw InvalidInput("lagged_covariates: sample shorter than the lag count");
  Eigen::MatrixXd X(T - lags, N * lags + (add_constant ? 1 : 0));
  for (int k = 1; k <= lags; ++k) X.middleCols((k - 1) * N, N) = panel.middleRows(lags - k, T - lags);
  if (add_constant) X.col(X.cols() - 1).setOnes();
  return X;
}

LpInputs align_lp_inputs(const Eigen::Ref<const Eigen::MatrixXd>& panel, const Eigen::Ref<const Eigen::VectorXd>& y,
                         const ShockSeries& zeta, int lags, bool add_constant) {
  const Eigen::Index T = panel.rows();
  const Eigen::Index Tz = zeta.zeta.size();
  if (y.size() != T) throw InvalidInput("align_lp_inputs: y and panel lengths differ");
  if (Tz > T || Tz == 0) throw InvalidInput("align_lp_inputs: shock series must be non-empty and no longer than the panel");
  if (!zeta.time_index.empty() && static_cast<Eigen::Index>(zeta.time_index.size()) != Tz)
    throw InvalidInput("align_lp_inputs: shock time index length mismatch");
  const Eigen::Index start = std::max<Eigen::Index>(lags, T - Tz);
  if (start >= T) throw InvalidInput("align_lp_inputs: no periods left after lags");
  const Eigen::Index n = T - start;
  LpInputs in;
  in.y = y.tail(n);
  in.zeta.zeta = zeta.zeta.tail(n);
  if (!zeta.time_index.empty()) in.zeta.time_index.assign(zeta.time_index.end() - n, zeta.time_index.end());
  in.covariates = lagged_covariates(panel, lags, add_constant).bottomRows(n);
  return in;
}

LpDataset build_lp_dataset(const Eigen::Ref<const Eigen::VectorXd>& y, const ShockSeries& zeta,
                           const Eigen::Ref<const Eigen::MatrixXd>& X, int h) {
  const Eigen::Index T = y.size();
  if (h < 0 || h >= T) throw InvalidInput("build_lp_dataset: horizon " + std::to_string(h) + " outside [0, T)");
  if (zeta.zeta.size() != T || X.rows() != T)
    throw InvalidInput("build_lp_dataset: y, zeta and X must have the same number of periods");
  if (!zeta.time_index.empty() && static_cast<Eigen::Index>(zeta.time_index.size()) != T)
    throw InvalidInput("build_lp_dataset: time index length != T");
  LpDataset d;
  d.horizon = h;
  const Eigen::Index rows = T - h;
  d.target = y.segment(h, rows);
  d.instrument = zeta.zeta.head(rows);
  d.covariates = X.topRows(rows);
  if (!zeta.time_index.empty()) d.time_index.assign(zeta.time_index.begin(), zeta.time_index.begin() + rows);
  return d;
}

Eigen::VectorXd ShockDraws::slot_values(int h, int draw, Eigen::Index row) const {
  if (h > num_horizons()) throw InvalidInput("ShockDraws: horizon exceeds stored residuals");
  Eigen::VectorXd v(h);
  for (int s = 0; s < h; ++s) v[s] = (*residuals[s])(draw, row);
  return v;
}

ShockSlotFeed ShockDraws::feed_for(int h, int first_column) const {
  if (h > num_horizons()) throw InvalidInput("ShockDraws: horizon exceeds stored residuals");
  ShockSlotFeed feed;
  feed.first_column = first_column;
  feed.sources.assign(residuals.begin(), residuals.begin() + h);
  return feed;
}

NetworkShape NetworkRule::shape_for(int input_dim) const {
  if (layers < 1) throw ConfigError("NetworkRule: need at least one hidden layer");
  if (width < 0) throw ConfigError("NetworkRule: width must be >= 0");
  NetworkShape s;
  s.input_dim = input_dim;
  s.hidden.assign(static_cast<std::size_t>(layers), width == 0 ? input_dim : width);
  return s;
}

SequentialFit estimate_sequential(const Eigen::Ref<const Eigen::VectorXd>& y, const ShockSeries& zeta,
                                  const Eigen::Ref<const Eigen::MatrixXd>& X, int H, const ChainConfig& cfg,
                                  const NetworkRule& rule) {
  if (H < 0) throw InvalidInput("estimate_sequential: negative maximum horizon");
  return estimate_sequential(y, zeta, X, std::vector<ChainConfig>(static_cast<std::size_t>(H + 1), cfg), rule);
}

SequentialFit estimate_sequential(const Eigen::Ref<const Eigen::VectorXd>& y, const ShockSeries& zeta,
                                  const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<ChainConfig>& cfgs,
                                  const NetworkRule& rule) {
  if (cfgs.empty()) throw InvalidInput("estimate_sequential: no horizons requested");
  for (const auto& c : cfgs) {
    c.validate();
    if (c.n_iter != cfgs.front().n_iter || c.n_burn != cfgs.front().n_burn)
      throw ConfigError("estimate_sequential: every horizon must use the same n_iter and n_burn");
  }
  const int H = static_cast<int>(cfgs.size()) - 1;
  SequentialFit fit;
  for (int h = 0; h <= H; ++h) {
    LpDataset data = build_lp_dataset(y, zeta, X, h);
    ChainConfig cfg = cfgs[static_cast<std::size_t>(h)];
    cfg.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(h)});
    const NetworkShape shape = rule.shape_for(data.num_regressors());
    const ShockSlotFeed feed = fit.shocks.feed_for(h, data.first_slot_column());
    ChainOutput chain = run_chain(data.target, data.design(), shape, cfg, h > 0 ? &feed : nullptr);
    fit.shocks.residuals.push_back(std::make_shared<const Eigen::MatrixXd>(chain.residuals));
    fit.chains.push_back(std::move(chain));
    fit.datasets.push_back(std::move(data));
  }
  return fit;
}

}  // namespace bnnlp
