// Independent reference implementations used only by the test suites.
#ifndef BNNLP_TESTS_ORACLES_HPP
#define BNNLP_TESTS_ORACLES_HPP

#include <cmath>
#include <random>
#include <vector>

#include "bnnlp/network.hpp"

namespace oracle {

inline double act(int m, double z, double alpha) {
  switch (m) {
    case 1: return z >= 0 ? z : alpha * z;
    case 2: return 1.0 / (1.0 + std::exp(-z));
    case 3: return z >= 0 ? z : 0.0;
    default: return std::tanh(z);
  }
}

/// Literal loop-nest evaluation of the network, mixture weights applied
/// component by component.
inline double naive_forward(const bnnlp::NetworkParamsd& p, const std::vector<double>& x) {
  std::vector<double> h = x;
  const int L = p.num_hidden_layers();
  for (int l = 0; l < L; ++l) {
    const auto& W = p.weights[l];
    std::vector<double> next(static_cast<std::size_t>(W.rows()), 0.0);
    for (int i = 0; i < W.rows(); ++i) {
      double z = p.biases[l][i];
      for (int j = 0; j < W.cols(); ++j) z += W(i, j) * h[j];
      double a = 0.0;
      for (int m = 0; m < 4; ++m) a += p.mixture.weights[l](i, m) * act(m + 1, z, p.mixture.leaky_slope);
      next[i] = a;
    }
    h = next;
  }
  double f = 0.0;
  for (int j = 0; j < p.weights[L].cols(); ++j) f += p.weights[L](0, j) * h[j];
  return f;
}

inline double naive_predict(const bnnlp::NetworkParamsd& p, const std::vector<double>& x) {
  double lin = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) lin += p.linear_coef[k] * x[k];
  return lin + naive_forward(p, x);
}

/// Random shape with K, Q <= max_dim and L in {1, 2}.
inline bnnlp::NetworkShape random_shape(std::mt19937_64& rng, int max_dim = 5) {
  std::uniform_int_distribution<int> dim(1, max_dim), layers(1, 2);
  bnnlp::NetworkShape s;
  s.input_dim = dim(rng);
  s.hidden.clear();
  const int L = layers(rng);
  for (int l = 0; l < L; ++l) s.hidden.push_back(dim(rng));
  return s;
}

/// Random parameters; `soft` draws Dirichlet(1,1,1,1) mixture weights.
inline bnnlp::NetworkParamsd random_params(const bnnlp::NetworkShape& s, std::mt19937_64& rng, bool soft,
                                           double scale = 0.8) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_int_distribution<int> pick(1, 4);
  std::exponential_distribution<double> ex(1.0);
  auto p = bnnlp::NetworkParamsd::zeros(s);
  for (auto& W : p.weights)
    for (Eigen::Index i = 0; i < W.size(); ++i) W.data()[i] = scale * n01(rng);
  for (auto& b : p.biases)
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = scale * n01(rng);
  for (Eigen::Index i = 0; i < p.linear_coef.size(); ++i) p.linear_coef[i] = n01(rng);
  for (int l = 0; l < s.num_hidden_layers(); ++l)
    for (int q = 0; q < s.hidden[l]; ++q) {
      if (soft) {
        Eigen::RowVector4d w;
        for (int m = 0; m < 4; ++m) w[m] = ex(rng);
        w /= w.sum();
        p.mixture.set_soft(l, q, w);
      } else {
        p.mixture.set_indicator(l, q, static_cast<bnnlp::Activation>(pick(rng)));
      }
    }
  return p;
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline Eigen::VectorXd random_input(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::VectorXd x(k);
  for (int i = 0; i < k; ++i) x[i] = 1.5 * n01(rng);
  return x;
}

// Central differences of f with respect to every packed inner parameter.
inline Eigen::VectorXd finite_difference_gradient(bnnlp::NetworkParamsd p, const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd theta = bnnlp::pack_inner(p);
  Eigen::VectorXd g(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd up = theta, dn = theta;
    up[i] += step;
    dn[i] -= step;
    bnnlp::unpack_inner(up, p);
    const double fu = naive_forward(p, to_std(x));
    bnnlp::unpack_inner(dn, p);
    const double fd = naive_forward(p, to_std(x));
    g[i] = (fu - fd) / (2 * step);
  }
  return g;
}

inline bool away_from_kinks(const bnnlp::NetworkParamsd& p, const Eigen::VectorXd& x) {
  for (const auto& z : bnnlp::forward(p, x).preactivations)
    if ((z.array().abs() <= 1e-3).any()) return false;
  return true;
}

}  // namespace oracle

#endif  // BNNLP_TESTS_ORACLES_HPP
