#ifndef BNNLP_HMC_HPP
#define BNNLP_HMC_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "bnnlp/horseshoe.hpp"
#include "bnnlp/network.hpp"
#include "bnnlp/rng.hpp"
#include "bnnlp/sv.hpp"

namespace bnnlp {

/// Value and gradient of a potential energy U(q).
struct PotentialValue {
  double energy = 0.0;
  Eigen::VectorXd gradient;
};

/// Leapfrog integration of dq/dt = p, dp/dt = -grad U(q) with identity mass.
/// `potential(q)` returns a PotentialValue; `current` must hold U and its
/// gradient at the incoming q and is replaced by the value at the final q.
/// Returns false as soon as a non-finite energy or gradient appears.
template <typename Potential>
bool leapfrog(Eigen::VectorXd& q, Eigen::VectorXd& p, double step_size, int n_steps, Potential&& potential,
              PotentialValue& current) {
  p -= 0.5 * step_size * current.gradient;
  for (int s = 0; s < n_steps; ++s) {
    q += step_size * p;
    current = potential(q);
    if (!std::isfinite(current.energy) || !current.gradient.allFinite()) return false;
    if (s + 1 < n_steps) p -= step_size * current.gradient;
  }
  p -= 0.5 * step_size * current.gradient;
  return p.allFinite();
}

struct HmcStep {
  bool accepted = false;
  bool divergent = false;
  double accept_prob = 0.0;
  /// H(end) - H(start); +inf on divergence.
  double energy_change = 0.0;
};

/// One HMC transition: standard Gaussian momenta, leapfrog trajectory,
/// Metropolis correction. On rejection `q` is left unchanged.
template <typename Potential>
HmcStep hmc_step(Eigen::VectorXd& q, double step_size, int n_steps, Potential&& potential, Rng& rng) {
  HmcStep out;
  PotentialValue start = potential(q);
  if (!std::isfinite(start.energy) || !start.gradient.allFinite())
    throw NumericError("hmc_step: non-finite potential at the current state");

  Eigen::VectorXd p = draw_normal_vector(rng, q.size());
  const double h0 = start.energy + 0.5 * p.squaredNorm();
  Eigen::VectorXd q_new = q;
  PotentialValue end = start;
  const bool ok = leapfrog(q_new, p, step_size, n_steps, potential, end);
  // The uniform is always consumed so the stream stays aligned.
  const double u = draw_uniform(rng);
  if (!ok) {
    out.divergent = true;
    out.energy_change = std::numeric_limits<double>::infinity();
    return out;
  }
  const double h1 = end.energy + 0.5 * p.squaredNorm();
  out.energy_change = h1 - h0;
  if (!std::isfinite(out.energy_change)) {
    out.divergent = true;
    return out;
  }
  out.accept_prob = std::min(1.0, std::exp(-out.energy_change));
  if (u < out.accept_prob) {
    q = std::move(q_new);
    out.accepted = true;
  }
  return out;
}

/// Negative log conditional posterior of the inner weights and biases:
///   U = 1/2 sum_t (r_t - f(x_t))^2 / obs_var_t + 1/2 sum_k theta_k^2 / prior_var_k
/// with r_t = y_t - x_t'gamma held fixed.
class InnerPotential {
 public:
  InnerPotential(NetworkParamsd params, const Eigen::MatrixXd& X, Eigen::VectorXd partial_residual,
                 Eigen::VectorXd inv_obs_var, Eigen::VectorXd inv_prior_var);

  PotentialValue operator()(const Eigen::VectorXd& theta);

  const NetworkParamsd& params() const { return params_; }

 private:
  NetworkParamsd params_;
  const Eigen::MatrixXd& X_;
  Eigen::VectorXd r_;
  Eigen::VectorXd inv_obs_;
  Eigen::VectorXd inv_prior_;
};

/// One HMC proposal for W_1..W_L and b_1..b_L, all else fixed.
/// `params` is updated in place on acceptance.
HmcStep hmc_update_inner(NetworkParamsd& params, const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::MatrixXd& X, const HorseshoeState& scales, const SvState& sv,
                         double step_size, int n_steps, Rng& rng);

}  // namespace bnnlp

#endif  // BNNLP_HMC_HPP
