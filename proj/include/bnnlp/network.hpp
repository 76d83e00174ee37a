#ifndef BNNLP_NETWORK_HPP
#define BNNLP_NETWORK_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "bnnlp/activation.hpp"
#include "bnnlp/errors.hpp"

namespace bnnlp {

/// Input dimension K and hidden widths Q_1..Q_L.
struct NetworkShape {
  int input_dim = 1;
  std::vector<int> hidden = {1};

  int num_hidden_layers() const { return static_cast<int>(hidden.size()); }

  /// Columns feeding layer l (0-based): K for the first layer, Q_{l-1} after.
  int fan_in(int layer) const { return layer == 0 ? input_dim : hidden[layer - 1]; }

  void validate() const {
    if (input_dim < 1) throw InvalidInput("NetworkShape: input dimension must be >= 1");
    if (hidden.empty()) throw InvalidInput("NetworkShape: need at least one hidden layer");
    for (int q : hidden)
      if (q < 1) throw InvalidInput("NetworkShape: neuron counts must be >= 1");
  }

  /// Number of entries in W_1..W_L and b_1..b_L.
  int num_inner_params() const {
    int n = 0;
    for (int l = 0; l < num_hidden_layers(); ++l) n += hidden[l] * (fan_in(l) + 1);
    return n;
  }

  bool operator==(const NetworkShape&) const = default;
};

/// All coefficients of one BNN regression y = x'gamma + f(x).
///
/// `weights` holds W_1..W_{L+1}; the last entry is the 1 x Q_L output row.
/// `biases` holds b_1..b_L; the output layer has no bias.
template <typename Scalar>
struct NetworkParams {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  Vector linear_coef;
  ActivationMixture<Scalar> mixture;

  static NetworkParams zeros(const NetworkShape& shape, Activation m = Activation::LeakyRelu) {
    shape.validate();
    NetworkParams p;
    const int L = shape.num_hidden_layers();
    for (int l = 0; l < L; ++l) {
      p.weights.push_back(Matrix::Zero(shape.hidden[l], shape.fan_in(l)));
      p.biases.push_back(Vector::Zero(shape.hidden[l]));
    }
    p.weights.push_back(Matrix::Zero(1, shape.hidden[L - 1]));
    p.linear_coef = Vector::Zero(shape.input_dim);
    p.mixture = ActivationMixture<Scalar>::uniform_hard(shape.hidden, m);
    return p;
  }

  int num_hidden_layers() const { return static_cast<int>(biases.size()); }
  int input_dim() const { return static_cast<int>(linear_coef.size()); }

  NetworkShape shape() const {
    NetworkShape s;
    s.input_dim = input_dim();
    s.hidden.clear();
    for (const auto& b : biases) s.hidden.push_back(static_cast<int>(b.size()));
    return s;
  }

  /// Throws InvalidInput when the stored matrices disagree with `s`.
  void check_shape(const NetworkShape& s) const {
    s.validate();
    const int L = s.num_hidden_layers();
    auto fail = [](const std::string& what) { throw InvalidInput("NetworkParams: " + what); };
    if (static_cast<int>(weights.size()) != L + 1) fail("expected L+1 weight matrices");
    if (static_cast<int>(biases.size()) != L) fail("expected L bias vectors");
    if (linear_coef.size() != s.input_dim) fail("linear coefficient length != K");
    for (int l = 0; l < L; ++l) {
      if (weights[l].rows() != s.hidden[l] || weights[l].cols() != s.fan_in(l))
        fail("W_" + std::to_string(l + 1) + " has wrong dimensions");
      if (biases[l].size() != s.hidden[l]) fail("b_" + std::to_string(l + 1) + " has wrong length");
    }
    if (weights[L].rows() != 1 || weights[L].cols() != s.hidden[L - 1])
      fail("output row has wrong dimensions");
    if (mixture.num_layers() != L) fail("mixture layer count != L");
    for (int l = 0; l < L; ++l)
      if (mixture.weights[l].rows() != s.hidden[l]) fail("mixture width mismatch");
  }

  bool all_finite() const {
    for (const auto& w : weights)
      if (!w.allFinite()) return false;
    for (const auto& b : biases)
      if (!b.allFinite()) return false;
    return linear_coef.allFinite();
  }
};

using NetworkParamsd = NetworkParams<double>;

template <typename Scalar>
struct ForwardResult {
  Scalar value;
  /// z_1..z_L.
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> preactivations;
};

/// Gradient of the scalar network output with respect to the inner layers.
template <typename Scalar>
struct InnerGradient {
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> weights;
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> biases;
};

/// f(x) = W_{L+1} h_L(... h_1(W_1 x + b_1) ...), plus the preactivations.
template <typename Scalar, typename Derived>
ForwardResult<Scalar> forward(const NetworkParams<Scalar>& params,
                              const Eigen::MatrixBase<Derived>& x) {
  using Vector = typename NetworkParams<Scalar>::Vector;
  if (x.size() != params.input_dim())
    throw InvalidInput("forward: input length " + std::to_string(x.size()) + " != K = " +
                       std::to_string(params.input_dim()));
  const int L = params.num_hidden_layers();
  ForwardResult<Scalar> out;
  out.preactivations.reserve(L);
  Vector h = x;
  for (int l = 0; l < L; ++l) {
    if (params.weights[l].cols() != h.size()) throw InvalidInput("forward: layer dimension mismatch");
    Vector z = params.weights[l] * h + params.biases[l];
    h.resize(z.size());
    for (Eigen::Index q = 0; q < z.size(); ++q) h[q] = params.mixture.apply(l, static_cast<int>(q), z[q]);
    out.preactivations.push_back(std::move(z));
  }
  out.value = params.weights[L].row(0).dot(h);
  return out;
}

template <typename Scalar, typename Derived>
ForwardResult<Scalar> forward(const NetworkParams<Scalar>& params, const NetworkShape& shape,
                              const Eigen::MatrixBase<Derived>& x) {
  params.check_shape(shape);
  return forward(params, x);
}

/// x'gamma + f(x).
template <typename Scalar, typename Derived>
Scalar predict_mean(const NetworkParams<Scalar>& params, const Eigen::MatrixBase<Derived>& x) {
  const Scalar linear = params.linear_coef.dot(x.template cast<Scalar>());
  return linear + forward(params, x).value;
}

/// Reverse-mode gradient of f(x) with respect to W_1..W_L and b_1..b_L,
/// evaluated at the current mixture weights.
template <typename Scalar, typename Derived>
InnerGradient<Scalar> forward_gradient(const NetworkParams<Scalar>& params,
                                       const Eigen::MatrixBase<Derived>& x) {
  using Vector = typename NetworkParams<Scalar>::Vector;
  const auto fwd = forward(params, x);
  const int L = params.num_hidden_layers();

  std::vector<Vector> acts(L + 1);
  acts[0] = x;
  for (int l = 0; l < L; ++l) {
    const auto& z = fwd.preactivations[l];
    acts[l + 1].resize(z.size());
    for (Eigen::Index q = 0; q < z.size(); ++q)
      acts[l + 1][q] = params.mixture.apply(l, static_cast<int>(q), z[q]);
  }

  InnerGradient<Scalar> grad;
  grad.weights.resize(L);
  grad.biases.resize(L);
  Vector upstream = params.weights[L].row(0).transpose();  // df/dh_L
  for (int l = L - 1; l >= 0; --l) {
    const auto& z = fwd.preactivations[l];
    Vector delta(z.size());
    for (Eigen::Index q = 0; q < z.size(); ++q)
      delta[q] = upstream[q] * params.mixture.derivative(l, static_cast<int>(q), z[q]);
    grad.weights[l] = delta * acts[l].transpose();
    grad.biases[l] = delta;
    if (l > 0) upstream = params.weights[l].transpose() * delta;
  }
  return grad;
}

/// Network outputs over a whole design matrix (one observation per row).
/// Layer quantities are stored Q_l x T.
template <typename Scalar>
struct BatchForward {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<Matrix> pre;   // z_l
  std::vector<Matrix> post;  // h_l(z_l)
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> f;
};

template <typename Scalar>
void apply_layer_activation(const ActivationMixture<Scalar>& mix, int layer,
                            const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& z,
                            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& h) {
  h.resize(z.rows(), z.cols());
  for (Eigen::Index q = 0; q < z.rows(); ++q)
    for (Eigen::Index t = 0; t < z.cols(); ++t) h(q, t) = mix.apply(layer, static_cast<int>(q), z(q, t));
}

template <typename Scalar>
BatchForward<Scalar> forward_batch(const NetworkParams<Scalar>& params,
                                   const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& X) {
  if (X.cols() != params.input_dim()) throw InvalidInput("forward_batch: design has wrong column count");
  const int L = params.num_hidden_layers();
  BatchForward<Scalar> out;
  out.pre.resize(L);
  out.post.resize(L);
  for (int l = 0; l < L; ++l) {
    if (l == 0)
      out.pre[0].noalias() = params.weights[0] * X.transpose();
    else
      out.pre[l].noalias() = params.weights[l] * out.post[l - 1];
    out.pre[l].colwise() += params.biases[l];
    apply_layer_activation(params.mixture, l, out.pre[l], out.post[l]);
  }
  out.f = (params.weights[L] * out.post[L - 1]).transpose();
  return out;
}

/// Sum_t dloss_df[t] * d f(x_t) / d(inner params), from a cached batch pass.
template <typename Scalar>
InnerGradient<Scalar> backprop_batch(const NetworkParams<Scalar>& params,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& X,
                                     const BatchForward<Scalar>& fwd,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& dloss_df) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int L = params.num_hidden_layers();
  InnerGradient<Scalar> grad;
  grad.weights.resize(L);
  grad.biases.resize(L);
  Matrix upstream = params.weights[L].transpose() * dloss_df.transpose();  // Q_L x T
  for (int l = L - 1; l >= 0; --l) {
    const Matrix& z = fwd.pre[l];
    Matrix delta(z.rows(), z.cols());
    for (Eigen::Index q = 0; q < z.rows(); ++q)
      for (Eigen::Index t = 0; t < z.cols(); ++t)
        delta(q, t) = upstream(q, t) * params.mixture.derivative(l, static_cast<int>(q), z(q, t));
    if (l == 0)
      grad.weights[0].noalias() = delta * X;
    else
      grad.weights[l].noalias() = delta * fwd.post[l - 1].transpose();
    grad.biases[l] = delta.rowwise().sum();
    if (l > 0) upstream.noalias() = params.weights[l].transpose() * delta;
  }
  return grad;
}

/// Inner parameters (W_1, b_1, ..., W_L, b_L) flattened column-major, the
/// coordinate system of the HMC block.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pack_inner(const NetworkParams<Scalar>& params) {
  Eigen::Index n = 0;
  for (int l = 0; l < params.num_hidden_layers(); ++l) n += params.weights[l].size() + params.biases[l].size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(n);
  Eigen::Index at = 0;
  for (int l = 0; l < params.num_hidden_layers(); ++l) {
    v.segment(at, params.weights[l].size()) = params.weights[l].reshaped();
    at += params.weights[l].size();
    v.segment(at, params.biases[l].size()) = params.biases[l];
    at += params.biases[l].size();
  }
  return v;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pack_inner(const InnerGradient<Scalar>& g) {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < g.weights.size(); ++l) n += g.weights[l].size() + g.biases[l].size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(n);
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    v.segment(at, g.weights[l].size()) = g.weights[l].reshaped();
    at += g.weights[l].size();
    v.segment(at, g.biases[l].size()) = g.biases[l];
    at += g.biases[l].size();
  }
  return v;
}

template <typename Scalar>
void unpack_inner(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v, NetworkParams<Scalar>& params) {
  Eigen::Index at = 0;
  for (int l = 0; l < params.num_hidden_layers(); ++l) {
    auto& W = params.weights[l];
    W = v.segment(at, W.size()).reshaped(W.rows(), W.cols());
    at += W.size();
    params.biases[l] = v.segment(at, params.biases[l].size());
    at += params.biases[l].size();
  }
  if (at != v.size()) throw InvalidInput("unpack_inner: vector length does not match network");
}

}  // namespace bnnlp

#endif  // BNNLP_NETWORK_HPP
