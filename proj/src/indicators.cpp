#include "bnnlp/indicators.hpp"

#include <cmath>
#include <limits>

#include "bnnlp/errors.hpp"

namespace bnnlp {

namespace {

// Network output when row `neuron` of hidden layer `layer` is replaced by
// activation `m`, starting from a cached batch pass.
Eigen::VectorXd output_with_candidate(const NetworkParamsd& params, const BatchForward<double>& fwd, int layer,
                                      int neuron, Activation m) {
  const int L = params.num_hidden_layers();
  const double slope = params.mixture.leaky_slope;
  Eigen::RowVectorXd candidate(fwd.pre[layer].cols());
  for (Eigen::Index t = 0; t < candidate.size(); ++t)
    candidate[t] = detail::activate(m, fwd.pre[layer](neuron, t), slope);

  if (layer == L - 1) {
    const double w = params.weights[L](0, neuron);
    return fwd.f + w * (candidate - fwd.post[layer].row(neuron)).transpose();
  }

  Eigen::MatrixXd h = fwd.post[layer];
  h.row(neuron) = candidate;
  for (int l = layer + 1; l < L; ++l) {
    Eigen::MatrixXd z = params.weights[l] * h;
    z.colwise() += params.biases[l];
    apply_layer_activation(params.mixture, l, z, h);
  }
  return (params.weights[L] * h).transpose();
}

double gaussian_loglik(const Eigen::VectorXd& resid, const Eigen::VectorXd& inv_var) {
  const double v = -0.5 * resid.cwiseAbs2().dot(inv_var);
  return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
}

}  // namespace

Eigen::Vector4d indicator_log_likelihoods(const NetworkParamsd& params, const Eigen::Ref<const Eigen::VectorXd>& y,
                                          const Eigen::MatrixXd& X, const Eigen::VectorXd& obs_var, int layer,
                                          int neuron) {
  const auto fwd = forward_batch(params, X);
  const Eigen::VectorXd r = y - X * params.linear_coef;
  const Eigen::VectorXd inv_var = obs_var.cwiseInverse();
  Eigen::Vector4d ll;
  for (int m = 0; m < kNumActivations; ++m)
    ll[m] = gaussian_loglik(r - output_with_candidate(params, fwd, layer, neuron, activation_from_index(m)), inv_var);
  return ll;
}

void draw_activation_indicators(NetworkParamsd& params, const Eigen::Ref<const Eigen::VectorXd>& y,
                                const Eigen::MatrixXd& X, const SvState& sv, Rng& rng) {
  const int L = params.num_hidden_layers();
  const Eigen::VectorXd r = y - X * params.linear_coef;
  const Eigen::VectorXd inv_var = sv.variances().cwiseInverse();
  auto fwd = forward_batch(params, X);

  for (int l = 0; l < L; ++l) {
    for (int q = 0; q < static_cast<int>(params.weights[l].rows()); ++q) {
      Eigen::Vector4d logp;
      for (int m = 0; m < kNumActivations; ++m) {
        // The uniform 1/4 prior adds the same constant to every entry.
        logp[m] = std::log(0.25) +
                  gaussian_loglik(r - output_with_candidate(params, fwd, l, q, activation_from_index(m)), inv_var);
      }
      const double top = logp.maxCoeff();
      if (!std::isfinite(top))
        throw NumericError("draw_activation_indicators: all candidate likelihoods are -inf at layer " +
                           std::to_string(l + 1) + ", neuron " + std::to_string(q + 1));
      Eigen::Vector4d prob = (logp.array() - top).exp();
      prob /= prob.sum();
      const double u = draw_uniform(rng);
      int pick = kNumActivations - 1;
      double acc = 0.0;
      for (int m = 0; m < kNumActivations; ++m) {
        acc += prob[m];
        if (u < acc) {
          pick = m;
          break;
        }
      }
      const Activation chosen = activation_from_index(pick);
      if (chosen == params.mixture.indicators[l][q]) continue;
      params.mixture.set_indicator(l, q, chosen);
      if (l == L - 1) {
        const Eigen::RowVectorXd old_row = fwd.post[l].row(q);
        for (Eigen::Index t = 0; t < old_row.size(); ++t)
          fwd.post[l](q, t) = detail::activate(chosen, fwd.pre[l](q, t), params.mixture.leaky_slope);
        fwd.f += params.weights[L](0, q) * (fwd.post[l].row(q) - old_row).transpose();
      } else {
        fwd = forward_batch(params, X);
      }
    }
  }
}

}  // namespace bnnlp
