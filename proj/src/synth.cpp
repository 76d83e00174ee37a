#include "bnnlp/synth.hpp"

#include <cmath>
#include <cstdio>

#include "bnnlp/errors.hpp"
#include "bnnlp/rng.hpp"

namespace bnnlp {

namespace {

constexpr int kBurn = 100;
constexpr int kMaTerms = 40;

double response_shape(DgpKind kind, double z) {
  switch (kind) {
    case DgpKind::SignAsymmetric: return z > 0.0 ? z : 0.0;
    case DgpKind::SizeNonlinear: return z * std::abs(z);
    default: return z;
  }
}

}  // namespace

DgpKind parse_dgp_kind(const std::string& name) {
  if (name == "linear") return DgpKind::Linear;
  if (name == "sign_asymmetric") return DgpKind::SignAsymmetric;
  if (name == "size_nonlinear") return DgpKind::SizeNonlinear;
  if (name == "sv_linear") return DgpKind::SvLinear;
  if (name == "recursive_var") return DgpKind::RecursiveVar;
  throw InvalidInput("unknown DGP kind: " + name);
}

std::string dgp_kind_name(DgpKind kind) {
  switch (kind) {
    case DgpKind::Linear: return "linear";
    case DgpKind::SignAsymmetric: return "sign_asymmetric";
    case DgpKind::SizeNonlinear: return "size_nonlinear";
    case DgpKind::SvLinear: return "sv_linear";
    case DgpKind::RecursiveVar: return "recursive_var";
  }
  return "unknown";
}

void DgpSpec::validate() const {
  if (T < 50) throw InvalidInput("DgpSpec: T must be >= 50");
  if (!(noise_sd > 0.0)) throw InvalidInput("DgpSpec: noise_sd must be > 0");
  if (kind == DgpKind::RecursiveVar && n_vars < 1) throw InvalidInput("DgpSpec: n_vars must be >= 1");
  if (kind == DgpKind::SvLinear && !(vol_ratio > 0.0)) throw InvalidInput("DgpSpec: vol_ratio must be > 0");
}

std::vector<std::string> monthly_dates(int count, int start_year, int start_month) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  int y = start_year, m = start_month;
  char buf[16];
  for (int i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof buf, "%04d-%02d", y, m);
    out.emplace_back(buf);
    if (++m > 12) {
      m = 1;
      ++y;
    }
  }
  return out;
}

SynthData generate(const DgpSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SynthData out;
  const int T = spec.T;
  out.dates = monthly_dates(T);

  if (spec.kind == DgpKind::RecursiveVar) {
    const int N = spec.n_vars;
    Eigen::MatrixXd A = spec.persistence * Eigen::MatrixXd::Identity(N, N);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
      B(i, i) = 1.0 + 0.25 * i;
      for (int j = 0; j < i; ++j) {
        B(i, j) = 0.5 / (1.0 + i - j);
        A(i, j) = 0.1;
      }
    }
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(T, N);
    out.true_shocks.resize(T, N);
    Eigen::VectorXd state = Eigen::VectorXd::Zero(N);
    for (int t = -kBurn; t < T; ++t) {
      const Eigen::VectorXd e = draw_normal_vector(rng, N);
      state = A * state + B * e;
      if (t >= 0) {
        Y.row(t) = state.transpose();
        out.true_shocks.row(t) = e.transpose();
      }
    }
    out.panel = Y;
    for (int i = 0; i < N; ++i) out.names.push_back("v" + std::to_string(i + 1));
    out.y = Y.col(N - 1);
    out.zeta = out.true_shocks.col(0);
    out.var_matrix = A;
    out.impact_matrix = B;
    out.ground_truth_nlp = [A, B, N](int h, double tau) {
      Eigen::MatrixXd Ah = Eigen::MatrixXd::Identity(N, N);
      for (int i = 0; i < h; ++i) Ah = Ah * A;
      return (Ah * B)(N - 1, 0) * tau;
    };
    return out;
  }

  const int total = T + kBurn;
  Eigen::VectorXd zeta(total);
  for (int t = 0; t < total; ++t) zeta[t] = draw_normal(rng);
  Eigen::VectorXd y(T);
  for (int t = 0; t < T; ++t) {
    const int at = t + kBurn;
    double mean = 0.0;
    double coef = spec.impact;
    for (int s = 0; s < kMaTerms && at - s >= 0; ++s) {
      mean += coef * response_shape(spec.kind, zeta[at - s]);
      coef *= spec.decay;
    }
    double sd = spec.noise_sd;
    if (spec.kind == DgpKind::SvLinear) sd *= std::exp(0.5 * std::log(spec.vol_ratio) * t / (T - 1.0));
    y[t] = mean + sd * draw_normal(rng);
  }
  out.zeta = zeta.tail(T);
  out.y = y;
  out.panel.resize(T, 2);
  out.panel.col(0) = out.zeta;
  out.panel.col(1) = y;
  out.names = {"shock", "y"};
  const DgpKind kind = spec.kind;
  const double impact = spec.impact, decay = spec.decay;
  out.ground_truth_nlp = [kind, impact, decay](int h, double tau) {
    if (h < 0 || h >= kMaTerms) return 0.0;
    return impact * std::pow(decay, h) * (response_shape(kind, tau) - response_shape(kind, 0.0));
  };
  return out;
}

}  // namespace bnnlp
