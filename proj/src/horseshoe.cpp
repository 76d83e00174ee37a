#include "bnnlp/horseshoe.hpp"

#include <algorithm>
#include <cmath>

namespace bnnlp {

namespace {

double clamp_scale(double v, int& clamped) {
  if (!(v >= kScaleFloor)) {
    ++clamped;
    return kScaleFloor;
  }
  if (v > kScaleCeiling) {
    ++clamped;
    return kScaleCeiling;
  }
  return v;
}

bool positive_finite(const Eigen::VectorXd& v) {
  return v.allFinite() && (v.array() > 0.0).all();
}

}  // namespace

bool ShrinkageBlock::all_positive_finite() const {
  return std::isfinite(lambda_sq) && lambda_sq > 0 && std::isfinite(xi) && xi > 0 &&
         positive_finite(varphi_sq) && positive_finite(nu);
}

HorseshoeState HorseshoeState::ones(const NetworkShape& shape) {
  shape.validate();
  HorseshoeState s;
  s.linear = ShrinkageBlock::ones(shape.input_dim);
  for (int l = 0; l < shape.num_hidden_layers(); ++l)
    s.inner.emplace_back(static_cast<std::size_t>(shape.hidden[l]), ShrinkageBlock::ones(shape.fan_in(l) + 1));
  s.output = ShrinkageBlock::ones(shape.hidden.back());
  return s;
}

Eigen::VectorXd HorseshoeState::inner_prior_variance(const NetworkShape& shape) const {
  Eigen::VectorXd v(shape.num_inner_params());
  Eigen::Index at = 0;
  for (int l = 0; l < shape.num_hidden_layers(); ++l) {
    const int rows = shape.hidden[l];
    const int cols = shape.fan_in(l);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) {
        const auto& b = inner[l][i];
        v[at++] = b.lambda_sq * b.varphi_sq[j];
      }
    for (int i = 0; i < rows; ++i) {
      const auto& b = inner[l][i];
      v[at++] = b.lambda_sq * b.varphi_sq[cols];
    }
  }
  return v;
}

bool HorseshoeState::all_positive_finite() const {
  if (!linear.all_positive_finite() || !output.all_positive_finite()) return false;
  for (const auto& layer : inner)
    for (const auto& b : layer)
      if (!b.all_positive_finite()) return false;
  return true;
}

int horseshoe_update(const Eigen::Ref<const Eigen::VectorXd>& coeffs, ShrinkageBlock& block, Rng& rng) {
  if (coeffs.size() != block.size()) throw InvalidInput("horseshoe_update: block size mismatch");
  if (!coeffs.allFinite()) throw InvalidInput("horseshoe_update: non-finite coefficients");
  const Eigen::Index p = coeffs.size();
  int clamped = 0;

  for (Eigen::Index j = 0; j < p; ++j) {
    const double w2 = coeffs[j] * coeffs[j];
    block.varphi_sq[j] =
        clamp_scale(draw_inverse_gamma(rng, 1.0, 1.0 / block.nu[j] + w2 / (2.0 * block.lambda_sq)), clamped);
    block.nu[j] = clamp_scale(draw_inverse_gamma(rng, 1.0, 1.0 + 1.0 / block.varphi_sq[j]), clamped);
  }

  double ss = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) ss += coeffs[j] * coeffs[j] / block.varphi_sq[j];
  block.lambda_sq =
      clamp_scale(draw_inverse_gamma(rng, 0.5 * static_cast<double>(p + 1), 1.0 / block.xi + 0.5 * ss), clamped);
  block.xi = clamp_scale(draw_inverse_gamma(rng, 1.0, 1.0 + 1.0 / block.lambda_sq), clamped);
  return clamped;
}

int horseshoe_update(const NetworkParamsd& params, HorseshoeState& state, Rng& rng, bool include_network) {
  int clamped = horseshoe_update(params.linear_coef, state.linear, rng);
  if (!include_network) return clamped;
  const int L = params.num_hidden_layers();
  for (int l = 0; l < L; ++l) {
    const auto& W = params.weights[l];
    Eigen::VectorXd row(W.cols() + 1);
    for (Eigen::Index i = 0; i < W.rows(); ++i) {
      row.head(W.cols()) = W.row(i).transpose();
      row[W.cols()] = params.biases[l][i];
      clamped += horseshoe_update(row, state.inner[l][i], rng);
    }
  }
  clamped += horseshoe_update(params.weights[L].row(0).transpose(), state.output, rng);
  return clamped;
}

}  // namespace bnnlp
