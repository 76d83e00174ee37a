#ifndef BNNLP_LP_HPP
#define BNNLP_LP_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "bnnlp/chain.hpp"
#include "bnnlp/var.hpp"

namespace bnnlp {

/// Horizon-h local projection design. Row t pairs the target y_{t+h} with
/// regressors [zeta_t | x_t' | eps_t .. eps_{t+h-1}]; the shock slots are
/// filled per MCMC draw.
struct LpDataset {
  int horizon = 0;
  Eigen::VectorXd target;
  Eigen::VectorXd instrument;
  Eigen::MatrixXd covariates;
  std::vector<std::string> time_index;

  Eigen::Index rows() const { return target.size(); }
  int num_shock_slots() const { return horizon; }
  static constexpr int instrument_column() { return 0; }
  int first_slot_column() const { return 1 + static_cast<int>(covariates.cols()); }
  int num_regressors() const { return first_slot_column() + num_shock_slots(); }

  /// [zeta | X | 0 ... 0]; slot columns are zero until filled.
  Eigen::MatrixXd design() const;
};

/// x_t = [panel_{t-1}', ..., panel_{t-lags}', 1] for t = lags..T-1.
Eigen::MatrixXd lagged_covariates(const Eigen::Ref<const Eigen::MatrixXd>& panel, int lags, bool add_constant = true);

/// Common sample of an LP system: y, the shock and lagged covariates on
/// one time index.
struct LpInputs {
  Eigen::VectorXd y;
  ShockSeries zeta;
  Eigen::MatrixXd covariates;
};

/// `panel` and `y` span periods 0..T-1; `zeta` covers the last
/// zeta.size() of them (a VAR shock loses its first p periods). The result
/// starts at max(lags, T - zeta.size()) so every row has full lags.
LpInputs align_lp_inputs(const Eigen::Ref<const Eigen::MatrixXd>& panel, const Eigen::Ref<const Eigen::VectorXd>& y,
                         const ShockSeries& zeta, int lags, bool add_constant = true);

/// Rows t = 0..T-h-1 of the horizon-h regression. `y`, `zeta.zeta` and
/// the rows of `X` share one time index. Throws InvalidInput for h < 0,
/// h >= T, or misaligned inputs.
LpDataset build_lp_dataset(const Eigen::Ref<const Eigen::VectorXd>& y, const ShockSeries& zeta,
                           const Eigen::Ref<const Eigen::MatrixXd>& X, int h);

/// Posterior residual draws per horizon: `residuals[s](j, t)` is eps^{(j)}
/// of horizon s at row t. Horizon h reads slots s = 0..h-1 at its own row t.
struct ShockDraws {
  std::vector<std::shared_ptr<const Eigen::MatrixXd>> residuals;

  int num_horizons() const { return static_cast<int>(residuals.size()); }
  int num_draws() const { return residuals.empty() ? 0 : static_cast<int>(residuals.front()->rows()); }

  /// (eps^{(j)}_t, ..., eps^{(j)}_{t+h-1}) for horizon h.
  Eigen::VectorXd slot_values(int h, int draw, Eigen::Index row) const;

  /// Feed that fills the shock columns of the horizon-h design.
  ShockSlotFeed feed_for(int h, int first_column) const;
};

/// Hidden-layer rule: `layers` hidden layers each of width `width`, or of
/// width K (the horizon's regressor count) when `width` is 0.
struct NetworkRule {
  int layers = 1;
  int width = 0;

  NetworkShape shape_for(int input_dim) const;
  bool operator==(const NetworkRule&) const = default;
};

struct SequentialFit {
  std::vector<LpDataset> datasets;
  std::vector<ChainOutput> chains;
  ShockDraws shocks;
};

/// Estimates horizons 0..H in order. Horizon 0 stores its residual draws;
/// horizon h >= 1 refreshes its h shock columns before every iteration
/// from the stored draws of horizons 0..h-1, so that retained draw j only
/// ever sees draw j of the earlier horizons. The chain of horizon h uses
/// seed derive_seed(cfg.seed, {h}).
SequentialFit estimate_sequential(const Eigen::Ref<const Eigen::VectorXd>& y, const ShockSeries& zeta,
                                  const Eigen::Ref<const Eigen::MatrixXd>& X, int H, const ChainConfig& cfg,
                                  const NetworkRule& rule = {});

/// Per-horizon configurations. All must share n_iter and n_burn.
SequentialFit estimate_sequential(const Eigen::Ref<const Eigen::VectorXd>& y, const ShockSeries& zeta,
                                  const Eigen::Ref<const Eigen::MatrixXd>& X, const std::vector<ChainConfig>& cfgs,
                                  const NetworkRule& rule = {});

}  // namespace bnnlp

#endif  // BNNLP_LP_HPP
