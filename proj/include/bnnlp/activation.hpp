#ifndef BNNLP_ACTIVATION_HPP
#define BNNLP_ACTIVATION_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "bnnlp/errors.hpp"

namespace bnnlp {

/// The four candidate activation functions. The numeric values are the
/// indicator labels used by the sampler (1..4).
enum class Activation : int { LeakyRelu = 1, Sigmoid = 2, Relu = 3, Tanh = 4 };

inline constexpr int kNumActivations = 4;
inline constexpr double kDefaultLeakySlope = 0.01;

inline constexpr std::array<Activation, kNumActivations> kAllActivations = {
    Activation::LeakyRelu, Activation::Sigmoid, Activation::Relu, Activation::Tanh};

inline int activation_index(Activation m) { return static_cast<int>(m) - 1; }

inline Activation activation_from_index(int idx) {
  if (idx < 0 || idx >= kNumActivations)
    throw InvalidInput("activation index out of range: " + std::to_string(idx));
  return static_cast<Activation>(idx + 1);
}

inline std::string_view activation_name(Activation m) {
  switch (m) {
    case Activation::LeakyRelu: return "leaky_relu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
  }
  return "unknown";
}

namespace detail {

template <typename Scalar>
inline Scalar activate(Activation m, Scalar z, Scalar leaky_slope) {
  using std::exp;
  using std::tanh;
  switch (m) {
    case Activation::LeakyRelu: return z > Scalar(0) ? z : leaky_slope * z;
    case Activation::Sigmoid:
      // Split on sign so exp never overflows.
      if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-z));
      else {
        const Scalar e = exp(z);
        return e / (Scalar(1) + e);
      }
    case Activation::Relu: return z > Scalar(0) ? z : Scalar(0);
    case Activation::Tanh: return tanh(z);
  }
  return Scalar(0);
}

// Left-limit subgradient at the kink: slope alpha for leakyReLU, 0 for ReLU.
template <typename Scalar>
inline Scalar activate_derivative(Activation m, Scalar z, Scalar leaky_slope) {
  switch (m) {
    case Activation::LeakyRelu: return z > Scalar(0) ? Scalar(1) : leaky_slope;
    case Activation::Sigmoid: {
      const Scalar s = activate(Activation::Sigmoid, z, leaky_slope);
      return s * (Scalar(1) - s);
    }
    case Activation::Relu: return z > Scalar(0) ? Scalar(1) : Scalar(0);
    case Activation::Tanh: {
      const Scalar t = std::tanh(z);
      return Scalar(1) - t * t;
    }
  }
  return Scalar(0);
}

}  // namespace detail

/// h^{(m)}(z). Throws InvalidInput on non-finite z.
template <typename Scalar>
Scalar base_activation(Activation m, Scalar z, Scalar leaky_slope = Scalar(kDefaultLeakySlope)) {
  if (!std::isfinite(z)) throw InvalidInput("base_activation: non-finite input");
  return detail::activate(m, z, leaky_slope);
}

/// Per-neuron convex combination of the four base activations.
///
/// `weights[l]` is a Q_l x 4 matrix whose rows lie on the probability simplex.
/// `indicators[l][q]` is the hard selection used by the sampler; when the
/// mixture is driven by indicators the corresponding weight row is the unit
/// basis vector for that activation.
template <typename Scalar>
struct ActivationMixture {
  using WeightMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, kNumActivations>;

  std::vector<WeightMatrix> weights;
  std::vector<std::vector<Activation>> indicators;
  Scalar leaky_slope = Scalar(kDefaultLeakySlope);

  static ActivationMixture uniform_hard(const std::vector<int>& neurons, Activation m) {
    ActivationMixture mix;
    for (int q : neurons) {
      mix.weights.push_back(WeightMatrix::Zero(q, kNumActivations));
      mix.indicators.emplace_back(static_cast<std::size_t>(q), m);
    }
    for (std::size_t l = 0; l < neurons.size(); ++l)
      for (int q = 0; q < neurons[l]; ++q) mix.set_indicator(static_cast<int>(l), q, m);
    return mix;
  }

  int num_layers() const { return static_cast<int>(weights.size()); }

  void set_indicator(int layer, int neuron, Activation m) {
    indicators[layer][neuron] = m;
    weights[layer].row(neuron).setZero();
    weights[layer](neuron, activation_index(m)) = Scalar(1);
  }

  /// Replace one neuron's weights with a soft mixture. The indicator is set
  /// to the arg-max component.
  void set_soft(int layer, int neuron, const Eigen::Matrix<Scalar, 1, kNumActivations>& omega) {
    weights[layer].row(neuron) = omega;
    Eigen::Index best = 0;
    omega.maxCoeff(&best);
    indicators[layer][neuron] = activation_from_index(static_cast<int>(best));
  }

  bool is_valid(Scalar tol = Scalar(1e-12)) const {
    if (indicators.size() != weights.size()) return false;
    for (std::size_t l = 0; l < weights.size(); ++l) {
      if (indicators[l].size() != static_cast<std::size_t>(weights[l].rows())) return false;
      for (Eigen::Index q = 0; q < weights[l].rows(); ++q) {
        if ((weights[l].row(q).array() < Scalar(0)).any()) return false;
        if (std::abs(weights[l].row(q).sum() - Scalar(1)) > tol) return false;
      }
    }
    return true;
  }

  void validate() const {
    if (!is_valid()) throw InvalidState("activation mixture weights leave the probability simplex");
  }

  Scalar apply(int layer, int neuron, Scalar z) const {
    Scalar out(0);
    for (int m = 0; m < kNumActivations; ++m) {
      const Scalar w = weights[layer](neuron, m);
      if (w != Scalar(0)) out += w * detail::activate(activation_from_index(m), z, leaky_slope);
    }
    return out;
  }

  Scalar derivative(int layer, int neuron, Scalar z) const {
    Scalar out(0);
    for (int m = 0; m < kNumActivations; ++m) {
      const Scalar w = weights[layer](neuron, m);
      if (w != Scalar(0))
        out += w * detail::activate_derivative(activation_from_index(m), z, leaky_slope);
    }
    return out;
  }
};

/// Sum_m omega_{l,q}^{(m)} h^{(m)}(z). Checks the simplex invariant of the
/// addressed neuron.
template <typename Scalar>
Scalar mixture_activation(const ActivationMixture<Scalar>& mix, int layer, int neuron, Scalar z) {
  if (layer < 0 || layer >= mix.num_layers() || neuron < 0 || neuron >= mix.weights[layer].rows())
    throw InvalidInput("mixture_activation: (layer, neuron) out of range");
  const auto row = mix.weights[layer].row(neuron);
  if ((row.array() < Scalar(0)).any() || std::abs(row.sum() - Scalar(1)) > Scalar(1e-12))
    throw InvalidState("mixture_activation: weights violate the simplex constraint");
  if (!std::isfinite(z)) throw InvalidInput("mixture_activation: non-finite input");
  return mix.apply(layer, neuron, z);
}

}  // namespace bnnlp

#endif  // BNNLP_ACTIVATION_HPP
