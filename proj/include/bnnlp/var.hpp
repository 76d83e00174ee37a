#ifndef BNNLP_VAR_HPP
#define BNNLP_VAR_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace bnnlp {

/// Reduced-form VAR(p) with the instrument variable ordered first.
struct VarSpec {
  int lags = 6;
  std::vector<std::string> variable_order;
  bool include_intercept = true;

  void validate() const;
  bool operator==(const VarSpec&) const = default;
};

struct VarFit {
  /// (intercept + N p) x N; column i holds equation i.
  Eigen::MatrixXd coefficients;
  /// (T - p) x N least-squares residuals.
  Eigen::MatrixXd residuals;
  /// U'U / (T - p).
  Eigen::MatrixXd sigma;
};

struct ShockSeries {
  Eigen::VectorXd zeta;
  std::vector<std::string> time_index;
};

/// Stacked lagged design [1, y_{t-1}', ..., y_{t-p}'] for t = p..T-1.
Eigen::MatrixXd var_design(const Eigen::Ref<const Eigen::MatrixXd>& data, int lags, bool include_intercept);

/// Equation-by-equation least squares. `data` columns follow
/// `spec.variable_order`. Throws InvalidInput when T <= N p + 1 or the
/// design is rank deficient (the message names the dependent columns).
VarFit fit_var_ols(const Eigen::Ref<const Eigen::MatrixXd>& data, const VarSpec& spec);

/// Lower-triangular P with P P' = sigma. Throws NumericError on failure.
Eigen::MatrixXd cholesky_impact(const Eigen::Ref<const Eigen::MatrixXd>& sigma);

/// All recursively identified shocks E = U (P')^{-1}.
Eigen::MatrixXd structural_shocks(const Eigen::Ref<const Eigen::MatrixXd>& residuals,
                                  const Eigen::Ref<const Eigen::MatrixXd>& sigma);

/// Unit-variance shock to the first-ordered variable: the first column of E.
ShockSeries extract_shock(const Eigen::Ref<const Eigen::MatrixXd>& residuals,
                          const Eigen::Ref<const Eigen::MatrixXd>& sigma,
                          std::vector<std::string> time_index = {});

}  // namespace bnnlp

#endif  // BNNLP_VAR_HPP
