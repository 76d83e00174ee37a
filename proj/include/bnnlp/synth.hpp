#ifndef BNNLP_SYNTH_HPP
#define BNNLP_SYNTH_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bnnlp {

enum class DgpKind { Linear, SignAsymmetric, SizeNonlinear, SvLinear, RecursiveVar };

DgpKind parse_dgp_kind(const std::string& name);
std::string dgp_kind_name(DgpKind kind);

/// Synthetic data-generating process.
///
/// The univariate kinds draw zeta_t ~ N(0, 1) iid and set
///   y_t = sum_{s >= 0} impact * decay^s * g(zeta_{t-s}) + noise_t
/// with g(z) = z (linear, sv_linear), max(0, z) (sign_asymmetric) or
/// sign(z) z^2 (size_nonlinear). sv_linear scales the noise variance up by
/// `vol_ratio` across the sample. recursive_var simulates an n_vars VAR(1)
/// with a lower-triangular impact matrix.
struct DgpSpec {
  DgpKind kind = DgpKind::Linear;
  int T = 500;
  double noise_sd = 0.5;
  std::uint64_t seed = 1;
  double impact = 1.0;
  double decay = 0.5;
  double vol_ratio = 10.0;
  int n_vars = 3;
  double persistence = 0.5;

  void validate() const;
};

struct SynthData {
  /// T x N panel, instrument variable first.
  Eigen::MatrixXd panel;
  std::vector<std::string> names;
  std::vector<std::string> dates;
  Eigen::VectorXd y;
  Eigen::VectorXd zeta;
  /// recursive_var only: true structural shocks (T x N), VAR(1) matrix and impact matrix.
  Eigen::MatrixXd true_shocks;
  Eigen::MatrixXd var_matrix;
  Eigen::MatrixXd impact_matrix;
  /// Exact NLP(h, tau) of y to the instrument shock.
  std::function<double(int, double)> ground_truth_nlp;
};

SynthData generate(const DgpSpec& spec);

/// Month labels "YYYY-MM" starting at January 1960.
std::vector<std::string> monthly_dates(int count, int start_year = 1960, int start_month = 1);

}  // namespace bnnlp

#endif  // BNNLP_SYNTH_HPP
