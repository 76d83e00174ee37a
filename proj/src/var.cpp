#include "bnnlp/var.hpp"

#include "bnnlp/errors.hpp"

namespace bnnlp {

void VarSpec::validate() const {
  if (lags < 1) throw ConfigError("VarSpec: lag order must be >= 1");
  if (variable_order.empty()) throw ConfigError("VarSpec: variable_order is empty");
}

Eigen::MatrixXd var_design(const Eigen::Ref<const Eigen::MatrixXd>& data, int lags, bool include_intercept) {
  const Eigen::Index T = data.rows();
  const Eigen::Index N = data.cols();
  const Eigen::Index offset = include_intercept ? 1 : 0;
  Eigen::MatrixXd Z(T - lags, offset + N * lags);
  if (include_intercept) Z.col(0).setOnes();
  for (int k = 1; k <= lags; ++k) Z.block(0, offset + (k - 1) * N, T - lags, N) = data.middleRows(lags - k, T - lags);
  return Z;
}

VarFit fit_var_ols(const Eigen::Ref<const Eigen::MatrixXd>& data, const VarSpec& spec) {
  spec.validate();
  const Eigen::Index T = data.rows();
  const Eigen::Index N = data.cols();
  if (static_cast<Eigen::Index>(spec.variable_order.size()) != N)
    throw InvalidInput("fit_var_ols: data has " + std::to_string(N) + " columns but variable_order names " +
                       std::to_string(spec.variable_order.size()));
  if (T <= N * spec.lags + 1)
    throw InvalidInput("fit_var_ols: need T > N p + 1 observations, have T = " + std::to_string(T));
  if (!data.allFinite()) throw InvalidInput("fit_var_ols: data contains non-finite values");

  const Eigen::MatrixXd Z = var_design(data, spec.lags, spec.include_intercept);
  const Eigen::MatrixXd Y = data.bottomRows(T - spec.lags);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z);
  if (qr.rank() < Z.cols()) {
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    const Eigen::Index offset = spec.include_intercept ? 1 : 0;
    for (Eigen::Index i = qr.rank(); i < Z.cols(); ++i) {
      const Eigen::Index c = perm[i];
      std::string name;
      if (spec.include_intercept && c == 0)
        name = "const";
      else {
        const Eigen::Index k = (c - offset) / N + 1;
        name = spec.variable_order[static_cast<std::size_t>((c - offset) % N)] + ".l" + std::to_string(k);
      }
      names += (names.empty() ? "" : ", ") + name;
    }
    throw InvalidInput("fit_var_ols: rank-deficient design; dependent columns: " + names);
  }

  VarFit fit;
  fit.coefficients = qr.solve(Y);
  fit.residuals = Y - Z * fit.coefficients;
  fit.sigma = fit.residuals.transpose() * fit.residuals / static_cast<double>(T - spec.lags);
  return fit;
}

Eigen::MatrixXd cholesky_impact(const Eigen::Ref<const Eigen::MatrixXd>& sigma) {
  if (sigma.rows() != sigma.cols()) throw InvalidInput("cholesky_impact: covariance is not square");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw NumericError("cholesky_impact: residual covariance is not positive definite; consider adding a small ridge");
  return llt.matrixL();
}

Eigen::MatrixXd structural_shocks(const Eigen::Ref<const Eigen::MatrixXd>& residuals,
                                  const Eigen::Ref<const Eigen::MatrixXd>& sigma) {
  if (residuals.cols() != sigma.rows()) throw InvalidInput("structural_shocks: residual width != covariance size");
  const Eigen::MatrixXd P = cholesky_impact(sigma);
  // E' = P^{-1} U'
  return P.triangularView<Eigen::Lower>().solve(residuals.transpose()).transpose();
}

ShockSeries extract_shock(const Eigen::Ref<const Eigen::MatrixXd>& residuals,
                          const Eigen::Ref<const Eigen::MatrixXd>& sigma, std::vector<std::string> time_index) {
  if (!time_index.empty() && static_cast<Eigen::Index>(time_index.size()) != residuals.rows())
    throw InvalidInput("extract_shock: time index length != residual rows");
  ShockSeries out;
  out.zeta = structural_shocks(residuals, sigma).col(0);
  out.time_index = std::move(time_index);
  return out;
}

}  // namespace bnnlp
