#ifndef BNNLP_INDICATORS_HPP
#define BNNLP_INDICATORS_HPP

#include <Eigen/Dense>

#include "bnnlp/network.hpp"
#include "bnnlp/rng.hpp"
#include "bnnlp/sv.hpp"

namespace bnnlp {

/// Log conditional likelihood of y for each candidate activation of neuron
/// (layer, neuron), holding every other parameter at `params`.
Eigen::Vector4d indicator_log_likelihoods(const NetworkParamsd& params, const Eigen::Ref<const Eigen::VectorXd>& y,
                                          const Eigen::MatrixXd& X, const Eigen::VectorXd& obs_var, int layer,
                                          int neuron);

/// Gibbs sweep over every activation indicator, layer by layer in ascending
/// neuron order. Each indicator is drawn with probability proportional to
/// (1/4) exp(log-likelihood). Updates `params.mixture` in place.
void draw_activation_indicators(NetworkParamsd& params, const Eigen::Ref<const Eigen::VectorXd>& y,
                                const Eigen::MatrixXd& X, const SvState& sv, Rng& rng);

}  // namespace bnnlp

#endif  // BNNLP_INDICATORS_HPP
