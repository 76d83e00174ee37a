#ifndef BNNLP_NLP_HPP
#define BNNLP_NLP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bnnlp/chain.hpp"
#include "bnnlp/lp.hpp"

namespace bnnlp {

struct NlpBand {
  double q16 = 0.0, q50 = 0.0, q84 = 0.0;
};

/// Posterior draws of NLP(h, tau), stored as
///   value(h, k, j) = linear(h, j) * multipliers[k] + nonlinear[k](h, j)
/// where linear holds the instrument coefficient of draw j and nonlinear[k]
/// the network contribution averaged over sampled histories. Keeping the
/// two apart makes proportional rescaling exact.
struct NlpResult {
  std::vector<double> taus;
  Eigen::MatrixXd linear;                  // horizons x draws
  std::vector<Eigen::MatrixXd> nonlinear;  // per tau: horizons x draws
  std::vector<double> multipliers;         // per tau

  int num_horizons() const { return static_cast<int>(linear.rows()); }
  int num_draws() const { return static_cast<int>(linear.cols()); }
  int num_taus() const { return static_cast<int>(taus.size()); }
  /// Index of `tau` in `taus`; throws InvalidInput when absent.
  int tau_index(double tau) const;

  double value(int h, int k, int j) const;
  Eigen::VectorXd values(int h, int k) const;
  NlpBand band(int h, int k) const;
};

/// Draw j's E(y | zeta = tau, x) - E(y | zeta = 0, x) for one full regressor
/// row `x` of the horizon's design (shock slots included). Exactly 0 at tau = 0.
double conditional_nlp(const ChainOutput& chain, int draw, const Eigen::Ref<const Eigen::VectorXd>& x, double tau,
                       int instrument_column = 0);

struct NlpOptions {
  std::vector<double> taus{1.0, -1.0, 3.0};
  int paths = 400;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Averages the conditional NLP over `paths` rows drawn uniformly with
/// replacement from each horizon's dataset, independently for every
/// (horizon, draw) with stream derive_seed(seed, {h, j}). The same rows
/// serve every tau. Shock slots take draw j's stored residuals. Results do
/// not depend on `threads`.
NlpResult unconditional_nlp(const SequentialFit& fit, const NlpOptions& opts);

/// Divides the tau-slice by tau, so a tau = -1 response is sign flipped and
/// a tau = 3 response scaled by 1/3. Other slices are left unchanged.
/// Throws InvalidInput for tau = 0 or a tau not in the result.
NlpResult rescale_for_comparison(const NlpResult& result, double tau);

}  // namespace bnnlp

#endif  // BNNLP_NLP_HPP
