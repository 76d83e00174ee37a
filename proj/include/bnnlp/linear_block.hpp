#ifndef BNNLP_LINEAR_BLOCK_HPP
#define BNNLP_LINEAR_BLOCK_HPP

#include <Eigen/Dense>

#include "bnnlp/horseshoe.hpp"
#include "bnnlp/rng.hpp"
#include "bnnlp/sv.hpp"

namespace bnnlp {

/// Draw of the stacked vector (gamma', W_{L+1})' from its Gaussian
/// conditional under y_t = x_t'gamma + W_{L+1} h_{L,t} + e_t,
/// e_t ~ N(0, obs_var_t), independent N(0, prior_var_k) priors:
///
///   precision = Z' diag(1/obs_var) Z + diag(1/prior_var),  Z = [X | H_L]
///   mean      = precision^{-1} Z' diag(1/obs_var) y
///
/// `hidden` may have zero columns, in which case only gamma is drawn.
/// A failed Cholesky factorization is retried once with diagonal jitter,
/// then reported as NumericError.
Eigen::VectorXd draw_linear_and_output(const Eigen::Ref<const Eigen::VectorXd>& y,
                                       const Eigen::Ref<const Eigen::MatrixXd>& X_linear,
                                       const Eigen::Ref<const Eigen::MatrixXd>& hidden,
                                       const Eigen::Ref<const Eigen::VectorXd>& prior_var,
                                       const Eigen::Ref<const Eigen::VectorXd>& obs_var, Rng& rng);

/// Same draw, with prior variances read from the gamma and output blocks of
/// `scales` and observation variances from `sv`. `hidden` is T x Q_L.
Eigen::VectorXd draw_linear_and_output(const Eigen::Ref<const Eigen::VectorXd>& y,
                                       const Eigen::Ref<const Eigen::MatrixXd>& X_linear,
                                       const Eigen::Ref<const Eigen::MatrixXd>& hidden,
                                       const HorseshoeState& scales, const SvState& sv, Rng& rng);

}  // namespace bnnlp

#endif  // BNNLP_LINEAR_BLOCK_HPP
