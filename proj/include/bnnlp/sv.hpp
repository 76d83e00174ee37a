#ifndef BNNLP_SV_HPP
#define BNNLP_SV_HPP

#include <Eigen/Dense>

#include "bnnlp/rng.hpp"

namespace bnnlp {

inline constexpr double kLogVolBound = 20.0;

/// Error variance path sigma_t^2 = exp(h_t), with
///   h_t = mu + phi_ar (h_{t-1} - mu) + sigma_eta * eta_t.
/// In the homoskedastic fallback every h_t equals log(sigma^2).
struct SvState {
  Eigen::VectorXd log_vol;
  double mu = 0.0;
  double phi_ar = 0.9;
  double sigma_eta = 0.3;

  static SvState constant(Eigen::Index T, double variance);

  Eigen::VectorXd variances() const { return log_vol.array().exp(); }
  bool is_valid() const;
  bool operator==(const SvState&) const = default;
};

/// Priors of the SV block: mu ~ N(mu_mean, mu_var), (phi_ar + 1) / 2 ~ Beta(a, b),
/// sigma_eta^2 ~ Gamma(shape, rate). `homo_*` is the IG prior of the
/// homoskedastic variance.
struct SvPrior {
  double mu_mean = 0.0;
  double mu_var = 10.0;
  double phi_beta_a = 20.0;
  double phi_beta_b = 1.5;
  double sigma2_shape = 0.5;
  double sigma2_rate = 0.5;
  double homo_shape = 0.01;
  double homo_rate = 0.01;
};

/// One sweep of the volatility block given the current residuals.
///
/// Enabled: single-site Metropolis over h_1..h_T (proposal from the AR(1)
/// conditional prior, accepted on the likelihood ratio), then mu from its
/// Gaussian conditional and phi_ar, sigma_eta by independence
/// Metropolis-Hastings. Disabled: one conjugate IG draw of a common variance.
/// Returns the number of h_t proposals accepted.
int sv_update(const Eigen::Ref<const Eigen::VectorXd>& residuals, SvState& sv, bool enabled, Rng& rng,
              const SvPrior& prior = {});

}  // namespace bnnlp

#endif  // BNNLP_SV_HPP
