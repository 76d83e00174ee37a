#include "bnnlp/linear_block.hpp"

#include "bnnlp/errors.hpp"

namespace bnnlp {

Eigen::VectorXd draw_linear_and_output(const Eigen::Ref<const Eigen::VectorXd>& y,
                                       const Eigen::Ref<const Eigen::MatrixXd>& X_linear,
                                       const Eigen::Ref<const Eigen::MatrixXd>& hidden,
                                       const Eigen::Ref<const Eigen::VectorXd>& prior_var,
                                       const Eigen::Ref<const Eigen::VectorXd>& obs_var, Rng& rng) {
  const Eigen::Index T = y.size();
  const Eigen::Index K = X_linear.cols();
  const Eigen::Index Q = hidden.cols();
  if (X_linear.rows() != T || (Q > 0 && hidden.rows() != T) || obs_var.size() != T)
    throw InvalidInput("draw_linear_and_output: rows of X, H and variances must match y");
  if (prior_var.size() != K + Q) throw InvalidInput("draw_linear_and_output: prior variance length != K + Q");

  Eigen::MatrixXd Z(T, K + Q);
  Z.leftCols(K) = X_linear;
  if (Q > 0) Z.rightCols(Q) = hidden;

  const Eigen::VectorXd inv_obs = obs_var.cwiseInverse();
  Eigen::MatrixXd precision(K + Q, K + Q);
  precision.setZero();
  precision.selfadjointView<Eigen::Lower>().rankUpdate((Z.array().colwise() * inv_obs.array().sqrt()).matrix().transpose());
  precision.diagonal() += prior_var.cwiseInverse();
  const Eigen::VectorXd rhs = Z.transpose() * (y.cwiseProduct(inv_obs));

  Eigen::LLT<Eigen::MatrixXd> chol(precision.selfadjointView<Eigen::Lower>());
  if (chol.info() != Eigen::Success) {
    const double jitter = 1e-8 * std::max(1.0, precision.diagonal().cwiseAbs().mean());
    precision.diagonal().array() += jitter;
    chol.compute(precision.selfadjointView<Eigen::Lower>());
    if (chol.info() != Eigen::Success)
      throw NumericError("draw_linear_and_output: posterior precision is not positive definite");
  }
  const Eigen::VectorXd mean = chol.solve(rhs);
  const Eigen::VectorXd z = draw_normal_vector(rng, K + Q);
  return mean + chol.matrixU().solve(z);
}

Eigen::VectorXd draw_linear_and_output(const Eigen::Ref<const Eigen::VectorXd>& y,
                                       const Eigen::Ref<const Eigen::MatrixXd>& X_linear,
                                       const Eigen::Ref<const Eigen::MatrixXd>& hidden,
                                       const HorseshoeState& scales, const SvState& sv, Rng& rng) {
  Eigen::VectorXd prior_var(X_linear.cols() + hidden.cols());
  prior_var.head(X_linear.cols()) = scales.linear.prior_variance();
  if (hidden.cols() > 0) prior_var.tail(hidden.cols()) = scales.output.prior_variance();
  return draw_linear_and_output(y, X_linear, hidden, prior_var, sv.variances(), rng);
}

}  // namespace bnnlp
