#include "bnnlp/hmc.hpp"

namespace bnnlp {

InnerPotential::InnerPotential(NetworkParamsd params, const Eigen::MatrixXd& X, Eigen::VectorXd partial_residual,
                               Eigen::VectorXd inv_obs_var, Eigen::VectorXd inv_prior_var)
    : params_(std::move(params)),
      X_(X),
      r_(std::move(partial_residual)),
      inv_obs_(std::move(inv_obs_var)),
      inv_prior_(std::move(inv_prior_var)) {}

PotentialValue InnerPotential::operator()(const Eigen::VectorXd& theta) {
  unpack_inner(theta, params_);
  const auto fwd = forward_batch(params_, X_);
  const Eigen::VectorXd err = r_ - fwd.f;
  PotentialValue out;
  out.energy = 0.5 * err.cwiseAbs2().dot(inv_obs_) + 0.5 * theta.cwiseAbs2().dot(inv_prior_);
  const Eigen::VectorXd dloss_df = -err.cwiseProduct(inv_obs_);
  out.gradient = pack_inner(backprop_batch(params_, X_, fwd, dloss_df)) + theta.cwiseProduct(inv_prior_);
  return out;
}

HmcStep hmc_update_inner(NetworkParamsd& params, const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::MatrixXd& X, const HorseshoeState& scales, const SvState& sv,
                         double step_size, int n_steps, Rng& rng) {
  if (X.rows() != y.size()) throw InvalidInput("hmc_update_inner: rows of X != length of y");
  const NetworkShape shape = params.shape();
  Eigen::VectorXd r = y - X * params.linear_coef;
  InnerPotential potential(params, X, std::move(r), sv.variances().cwiseInverse(),
                           scales.inner_prior_variance(shape).cwiseInverse());
  Eigen::VectorXd theta = pack_inner(params);
  const HmcStep step = hmc_step(theta, step_size, n_steps, potential, rng);
  if (step.accepted) unpack_inner(theta, params);
  return step;
}

}  // namespace bnnlp
