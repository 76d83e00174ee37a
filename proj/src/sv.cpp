#include "bnnlp/sv.hpp"

#include <algorithm>
#include <cmath>

#include "bnnlp/errors.hpp"

namespace bnnlp {

namespace {

double obs_loglik(double h, double e2) { return -0.5 * h - 0.5 * e2 * std::exp(-h); }

double phi_log_prior(double phi, const SvPrior& prior) {
  const double x = 0.5 * (phi + 1.0);
  return (prior.phi_beta_a - 1.0) * std::log(x) + (prior.phi_beta_b - 1.0) * std::log1p(-x);
}

// log N(d0; 0, sigma2 / (1 - phi^2)) up to a constant.
double initial_loglik(double d0, double phi, double sigma2) {
  const double var = sigma2 / (1.0 - phi * phi);
  return -0.5 * std::log(var) - 0.5 * d0 * d0 / var;
}

double sigma2_log_prior(double s2, const SvPrior& prior) {
  return (prior.sigma2_shape - 1.0) * std::log(s2) - prior.sigma2_rate * s2;
}

}  // namespace

SvState SvState::constant(Eigen::Index T, double variance) {
  SvState s;
  const double h = std::clamp(std::log(std::max(variance, 1e-300)), -kLogVolBound, kLogVolBound);
  s.log_vol = Eigen::VectorXd::Constant(T, h);
  s.mu = h;
  return s;
}

bool SvState::is_valid() const {
  return std::abs(phi_ar) < 1.0 && sigma_eta > 0.0 && std::isfinite(mu) && log_vol.allFinite() &&
         (log_vol.array().abs() <= kLogVolBound).all();
}

int sv_update(const Eigen::Ref<const Eigen::VectorXd>& residuals, SvState& sv, bool enabled, Rng& rng,
              const SvPrior& prior) {
  const Eigen::Index T = residuals.size();
  if (sv.log_vol.size() != T) throw InvalidInput("sv_update: residual length != log-volatility length");
  if (T == 0) return 0;

  if (!enabled) {
    const double rate = prior.homo_rate + 0.5 * residuals.squaredNorm();
    const double s2 = draw_inverse_gamma(rng, prior.homo_shape + 0.5 * static_cast<double>(T), rate);
    const double h = std::clamp(std::log(s2), -kLogVolBound, kLogVolBound);
    sv.log_vol.setConstant(h);
    sv.mu = h;
    return 0;
  }

  const double mu = sv.mu;
  const double phi = sv.phi_ar;
  const double s2 = sv.sigma_eta * sv.sigma_eta;
  auto& h = sv.log_vol;
  int accepted = 0;

  for (Eigen::Index t = 0; t < T; ++t) {
    double mean = mu;
    double var = s2 / (1.0 - phi * phi);
    if (T > 1) {
      if (t == 0) {
        mean = mu + phi * (h[1] - mu);
        var = s2;
      } else if (t == T - 1) {
        mean = mu + phi * (h[t - 1] - mu);
        var = s2;
      } else {
        mean = mu + phi * ((h[t - 1] - mu) + (h[t + 1] - mu)) / (1.0 + phi * phi);
        var = s2 / (1.0 + phi * phi);
      }
    }
    const double proposal = mean + std::sqrt(var) * draw_normal(rng);
    if (std::abs(proposal) > kLogVolBound) continue;
    const double e2 = residuals[t] * residuals[t];
    const double log_ratio = obs_loglik(proposal, e2) - obs_loglik(h[t], e2);
    if (std::log(draw_uniform(rng)) < log_ratio) {
      h[t] = proposal;
      ++accepted;
    }
  }

  if (T < 3) return accepted;

  // mu | h, phi, sigma_eta
  {
    double precision = 1.0 / prior.mu_var + (1.0 - phi * phi) / s2;
    double weighted = prior.mu_mean / prior.mu_var + (1.0 - phi * phi) * h[0] / s2;
    for (Eigen::Index t = 1; t < T; ++t) {
      precision += (1.0 - phi) * (1.0 - phi) / s2;
      weighted += (1.0 - phi) * (h[t] - phi * h[t - 1]) / s2;
    }
    sv.mu = weighted / precision + draw_normal(rng) / std::sqrt(precision);
  }

  const Eigen::VectorXd d = h.array() - sv.mu;

  // phi_ar: proposal from the transition likelihood, corrected for the prior
  // and the stationary density of h_1.
  {
    const double sxx = d.head(T - 1).squaredNorm();
    const double sxy = d.head(T - 1).dot(d.tail(T - 1));
    const double proposal = sxy / sxx + std::sqrt(s2 / sxx) * draw_normal(rng);
    if (std::abs(proposal) < 1.0) {
      const double log_ratio = phi_log_prior(proposal, prior) + initial_loglik(d[0], proposal, s2) -
                               phi_log_prior(sv.phi_ar, prior) - initial_loglik(d[0], sv.phi_ar, s2);
      if (std::log(draw_uniform(rng)) < log_ratio) sv.phi_ar = proposal;
    }
  }

  // sigma_eta^2: IG proposal from the transition likelihood.
  {
    const double p = sv.phi_ar;
    const Eigen::VectorXd innov = d.tail(T - 1) - p * d.head(T - 1);
    const double proposal = draw_inverse_gamma(rng, 0.5 * static_cast<double>(T - 1), 0.5 * innov.squaredNorm());
    if (std::isfinite(proposal) && proposal > 0.0) {
      auto log_target_over_proposal = [&](double v) {
        return sigma2_log_prior(v, prior) + initial_loglik(d[0], p, v) + std::log(v);
      };
      const double log_ratio = log_target_over_proposal(proposal) - log_target_over_proposal(s2);
      if (std::log(draw_uniform(rng)) < log_ratio) sv.sigma_eta = std::sqrt(proposal);
    }
  }
  return accepted;
}

}  // namespace bnnlp
