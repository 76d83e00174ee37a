#include "doctest.h"

#include <array>
#include <cmath>
#include <random>

#include "bnnlp/indicators.hpp"
#include "oracles.hpp"

using namespace bnnlp;

namespace {

double brute_force_loglik(NetworkParamsd p, const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                          const Eigen::VectorXd& var, int layer, int neuron, Activation m) {
  p.mixture.set_indicator(layer, neuron, m);
  double ll = 0.0;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    std::vector<double> x;
    for (Eigen::Index k = 0; k < X.cols(); ++k) x.push_back(X(t, k));
    const double r = y[t] - oracle::naive_predict(p, x);
    ll += -0.5 * r * r / var[t];
  }
  return ll;
}

}  // namespace

TEST_CASE("candidate log-likelihoods match brute-force evaluation") {
  std::mt19937_64 gen(42);
  NetworkShape s{3, {3, 2}};
  const auto p = oracle::random_params(s, gen, false);
  Rng rng(3);
  const int T = 15;
  Eigen::MatrixXd X(T, 3);
  for (int t = 0; t < T; ++t) X.row(t) = draw_normal_vector(rng, 3).transpose();
  const Eigen::VectorXd y = draw_normal_vector(rng, T);
  const Eigen::VectorXd var = Eigen::VectorXd::LinSpaced(T, 0.5, 1.5);
  for (int l = 0; l < 2; ++l)
    for (int q = 0; q < s.hidden[l]; ++q) {
      const Eigen::Vector4d ll = indicator_log_likelihoods(p, y, X, var, l, q);
      for (int m = 0; m < 4; ++m)
        CHECK(ll[m] == doctest::Approx(brute_force_loglik(p, y, X, var, l, q, activation_from_index(m))).epsilon(1e-10));
    }
}

TEST_CASE("uninformative likelihood gives uniform indicator frequencies") {
  // Zero output weights make f independent of every activation choice.
  NetworkShape s{2, {1}};
  auto p = NetworkParamsd::zeros(s);
  p.weights[0] << 1.0, -1.0;
  Rng rng(8);
  const int T = 10;
  Eigen::MatrixXd X(T, 2);
  for (int t = 0; t < T; ++t) X.row(t) = draw_normal_vector(rng, 2).transpose();
  const Eigen::VectorXd y = draw_normal_vector(rng, T);
  const auto sv = SvState::constant(T, 1.0);
  std::array<int, 4> counts{};
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    draw_activation_indicators(p, y, X, sv, rng);
    ++counts[activation_index(p.mixture.indicators[0][0])];
    REQUIRE(p.mixture.is_valid());
  }
  for (int c : counts) CHECK(std::abs(c / static_cast<double>(n) - 0.25) < 0.01);
}

TEST_CASE("a decisive likelihood selects the generating activation") {
  NetworkShape s{1, {1}};
  auto p = NetworkParamsd::zeros(s);
  p.weights[0] << 1.5;
  p.weights[1] << 2.0;
  p.mixture.set_indicator(0, 0, Activation::Tanh);
  const int T = 60;
  Eigen::MatrixXd X = Eigen::VectorXd::LinSpaced(T, -3.0, 3.0);
  Eigen::VectorXd y(T);
  for (int t = 0; t < T; ++t) y[t] = 2.0 * std::tanh(1.5 * X(t, 0));
  const auto sv = SvState::constant(T, 0.01);
  Rng rng(1);
  p.mixture.set_indicator(0, 0, Activation::Relu);
  draw_activation_indicators(p, y, X, sv, rng);
  CHECK(p.mixture.indicators[0][0] == Activation::Tanh);
}

TEST_CASE("indicator sweep is reproducible") {
  std::mt19937_64 gen(5);
  NetworkShape s{2, {3}};
  auto a = oracle::random_params(s, gen, false, 0.3);
  auto b = a;
  Rng data(2);
  Eigen::MatrixXd X(20, 2);
  for (int t = 0; t < 20; ++t) X.row(t) = draw_normal_vector(data, 2).transpose();
  const Eigen::VectorXd y = draw_normal_vector(data, 20);
  const auto sv = SvState::constant(20, 1.0);
  Rng ra(11), rb(11);
  for (int i = 0; i < 25; ++i) {
    draw_activation_indicators(a, y, X, sv, ra);
    draw_activation_indicators(b, y, X, sv, rb);
  }
  CHECK(a.mixture.indicators == b.mixture.indicators);
}

TEST_CASE("corrupted state is a numeric error") {
  NetworkShape s{1, {1}};
  auto p = NetworkParamsd::zeros(s);
  p.weights[0] << 1.0;
  p.weights[1] << 1e300;
  const Eigen::MatrixXd X = Eigen::MatrixXd::Constant(3, 1, 1e10);
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(3);
  const auto sv = SvState::constant(3, 1e-8);
  Rng rng(1);
  CHECK_THROWS_AS(draw_activation_indicators(p, y, X, sv, rng), NumericError);
}
