#ifndef BNNLP_HORSESHOE_HPP
#define BNNLP_HORSESHOE_HPP

#include <Eigen/Dense>
#include <vector>

#include "bnnlp/network.hpp"
#include "bnnlp/rng.hpp"

namespace bnnlp {

inline constexpr double kScaleFloor = 1e-12;
inline constexpr double kScaleCeiling = 1e12;

/// Horseshoe scales for one coefficient block w_1..w_p sharing a global scale:
///   w_j ~ N(0, lambda_sq * varphi_sq_j), lambda, varphi_j ~ C+(0, 1),
/// written through the auxiliary inverse-Gamma decomposition
///   varphi_sq_j | nu_j ~ IG(1/2, 1/nu_j), nu_j ~ IG(1/2, 1),
///   lambda_sq | xi ~ IG(1/2, 1/xi),       xi ~ IG(1/2, 1).
struct ShrinkageBlock {
  double lambda_sq = 1.0;
  double xi = 1.0;
  Eigen::VectorXd varphi_sq;
  Eigen::VectorXd nu;

  static ShrinkageBlock ones(Eigen::Index p) {
    return {1.0, 1.0, Eigen::VectorXd::Ones(p), Eigen::VectorXd::Ones(p)};
  }

  Eigen::Index size() const { return varphi_sq.size(); }
  Eigen::VectorXd prior_variance() const { return lambda_sq * varphi_sq; }

  bool all_positive_finite() const;
  bool operator==(const ShrinkageBlock&) const = default;
};

/// Every shrunk block of a BNN regression.
///
/// `inner[l][i]` covers row i of W_{l+1} with the bias b_{l+1,i} appended as
/// the last element. `output` covers W_{L+1}; `linear` covers gamma.
struct HorseshoeState {
  ShrinkageBlock linear;
  std::vector<std::vector<ShrinkageBlock>> inner;
  ShrinkageBlock output;

  static HorseshoeState ones(const NetworkShape& shape);

  /// Prior variances of the inner parameters in `pack_inner` order.
  Eigen::VectorXd inner_prior_variance(const NetworkShape& shape) const;

  bool all_positive_finite() const;
  bool operator==(const HorseshoeState&) const = default;
};

/// One sweep of the auxiliary-variable Gibbs updates for a single block.
/// Returns the number of draws clamped into [kScaleFloor, kScaleCeiling].
int horseshoe_update(const Eigen::Ref<const Eigen::VectorXd>& coeffs, ShrinkageBlock& block, Rng& rng);

/// Sweeps every block of `state` against the matching coefficients in
/// `params`: gamma, the rows of W_1..W_L with their biases, and W_{L+1}.
/// With `include_network == false` only the gamma block is updated.
int horseshoe_update(const NetworkParamsd& params, HorseshoeState& state, Rng& rng,
                     bool include_network = true);

}  // namespace bnnlp

#endif  // BNNLP_HORSESHOE_HPP
