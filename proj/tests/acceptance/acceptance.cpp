// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bnnlp/chain.hpp"
#include "bnnlp/hmc.hpp"
#include "bnnlp/horseshoe.hpp"
#include "bnnlp/io.hpp"
#include "bnnlp/linear_block.hpp"
#include "bnnlp/lp.hpp"
#include "bnnlp/network.hpp"
#include "bnnlp/nlp.hpp"
#include "bnnlp/pipeline.hpp"
#include "bnnlp/stats.hpp"
#include "bnnlp/synth.hpp"
#include "bnnlp/var.hpp"
#include "oracles.hpp"

using namespace bnnlp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

LpInputs synth_inputs(DgpKind kind, int T, std::uint64_t seed) {
  DgpSpec d;
  d.kind = kind;
  d.T = T;
  d.seed = seed;
  const SynthData s = generate(d);
  return align_lp_inputs(s.panel, s.y, ShockSeries{s.zeta, s.dates}, 3);
}

ChainConfig desk_chain(std::uint64_t seed, bool network = true) {
  ChainConfig c;
  c.n_iter = 4000;
  c.n_burn = 2000;
  c.seed = seed;
  c.network_enabled = network;
  return c;
}

// ---------------------------------------------------------------------------

Outcome forward_and_gradient() {
  std::mt19937_64 rng(20240601);
  double worst_forward = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto s = oracle::random_shape(rng);
    const auto p = oracle::random_params(s, rng, rep % 2 == 0);
    const auto x = oracle::random_input(s.input_dim, rng);
    const double ref = oracle::naive_forward(p, oracle::to_std(x));
    worst_forward = std::max(worst_forward, std::abs(forward(p, x).value - ref) / std::max(1.0, std::abs(ref)));
  }
  double worst_grad = 0.0;
  int checked = 0;
  while (checked < 20) {
    const auto s = oracle::random_shape(rng);
    const auto p = oracle::random_params(s, rng, checked % 2 == 1);
    const auto x = oracle::random_input(s.input_dim, rng);
    if (!oracle::away_from_kinks(p, x)) continue;
    const Eigen::VectorXd a = pack_inner(forward_gradient(p, x));
    const Eigen::VectorXd n = oracle::finite_difference_gradient(p, x, 1e-6);
    for (Eigen::Index i = 0; i < a.size(); ++i)
      worst_grad = std::max(worst_grad, std::abs(a[i] - n[i]) / std::max({std::abs(a[i]), std::abs(n[i]), 1e-6}));
    ++checked;
  }
  return {worst_forward <= 1e-12 && worst_grad < 1e-4,
          fmt("max forward error %.2e (<= 1e-12), max gradient rel. error %.2e (< 1e-4)", worst_forward, worst_grad)};
}

Outcome conjugate_block() {
  const int T = 40, n = 100000;
  const double v = 0.5, s2 = 2.0;
  Rng data(101);
  Eigen::VectorXd x(T), y(T);
  for (int t = 0; t < T; ++t) {
    x[t] = draw_normal(data);
    y[t] = 0.7 * x[t] + std::sqrt(s2) * draw_normal(data);
  }
  // ridge posterior
  const double post_var = 1.0 / (x.squaredNorm() / s2 + 1.0 / v);
  const double post_mean = post_var * x.dot(y) / s2;

  Rng rng(7);
  Eigen::VectorXd draws(n);
  const Eigen::MatrixXd X = x;
  const Eigen::MatrixXd none(T, 0);
  const Eigen::VectorXd prior = Eigen::VectorXd::Constant(1, v);
  const Eigen::VectorXd obs = Eigen::VectorXd::Constant(T, s2);
  for (int i = 0; i < n; ++i) draws[i] = draw_linear_and_output(y, X, none, prior, obs, rng)[0];
  const double mean = draws.mean();
  const double var = (draws.array() - mean).square().sum() / (n - 1);
  const double z_mean = std::abs(mean - post_mean) / std::sqrt(post_var / n);
  const double z_var = std::abs(var - post_var) / (post_var * std::sqrt(2.0 / (n - 1)));
  return {z_mean < 3.0 && z_var < 3.0, fmt("mean off by %.2f SE, variance off by %.2f SE (both < 3)", z_mean, z_var)};
}

struct GaussianPotential {
  Eigen::Vector2d mean;
  Eigen::Matrix2d precision;
  PotentialValue operator()(const Eigen::VectorXd& q) const {
    const Eigen::Vector2d d = q - mean;
    return {0.5 * d.dot(precision * d), precision * d};
  }
};

Outcome hmc_kernel() {
  GaussianPotential U{{0.5, -1.0}, (Eigen::Matrix2d() << 2.0, 0.6, 0.6, 1.0).finished()};
  Eigen::VectorXd q0(2), p0(2);
  q0 << 1.3, 0.2;
  p0 << -0.4, 0.9;
  Eigen::VectorXd q = q0, p = p0;
  PotentialValue cur = U(q);
  leapfrog(q, p, 0.05, 40, U, cur);
  p = -p;
  leapfrog(q, p, 0.05, 40, U, cur);
  const double reversal = std::max((q - q0).cwiseAbs().maxCoeff(), (p + p0).cwiseAbs().maxCoeff());

  GaussianPotential V{{0.0, 0.0}, (Eigen::Matrix2d() << 1.0, 0.0, 0.0, 4.0).finished()};
  auto energy_error = [&](double eps, int steps) {
    Rng r(8);
    double total = 0.0;
    for (int i = 0; i < 500; ++i) {
      Eigen::VectorXd qq = draw_normal_vector(r, 2), pp = draw_normal_vector(r, 2);
      PotentialValue c = V(qq);
      const double h0 = c.energy + 0.5 * pp.squaredNorm();
      leapfrog(qq, pp, eps, steps, V, c);
      total += std::abs(c.energy + 0.5 * pp.squaredNorm() - h0);
    }
    return total / 500.0;
  };
  const double ratio = energy_error(0.1, 10) / energy_error(0.05, 20);

  GaussianPotential G{{1.0, -2.0}, (Eigen::Matrix2d() << 1.0, 0.8, 0.8, 1.0).finished().inverse()};
  Rng rng(17);
  const int n = 100000, warm = 500;
  Eigen::MatrixXd draws(n, 2);
  Eigen::VectorXd state = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < n + warm; ++i) {
    hmc_step(state, 0.2, 8, G, rng);
    if (i >= warm) draws.row(i - warm) = state.transpose();
  }
  double worst_z = 0.0;
  for (int k = 0; k < 2; ++k)
    worst_z = std::max(worst_z, std::abs(draws.col(k).mean() - G.mean[k]) / batch_means_se(draws.col(k)));
  return {reversal < 1e-10 && ratio >= 3.0 && ratio <= 5.0 && worst_z < 3.0,
          fmt("reversal error %.1e, energy-error ratio %.2f in [3,5], mean off by %.2f SE (< 3)", reversal, ratio,
              worst_z)};
}

Outcome horseshoe_prior() {
  const int p = 3, sweeps = 200000;
  ShrinkageBlock block = ShrinkageBlock::ones(p);
  Rng rng(12345);
  std::vector<double> abs_w;
  abs_w.reserve(static_cast<std::size_t>(sweeps) * p);
  Eigen::VectorXd w(p);
  for (int s = 0; s < sweeps; ++s) {
    for (int j = 0; j < p; ++j) w[j] = std::sqrt(block.lambda_sq * block.varphi_sq[j]) * draw_normal(rng);
    horseshoe_update(w, block, rng);
    for (int j = 0; j < p; ++j) abs_w.push_back(std::abs(w[j]));
  }
  const double chain = quantile(std::move(abs_w), 0.5);

  std::mt19937_64 gen(99);
  std::cauchy_distribution<double> cauchy(0.0, 1.0);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> direct(1000000);
  for (auto& v : direct) v = std::abs(std::abs(cauchy(gen)) * std::abs(cauchy(gen)) * n01(gen));
  const double oracle = quantile(std::move(direct), 0.5);
  const double rel = std::abs(chain / oracle - 1.0);
  return {rel < 0.10, fmt("median |w| chain %.4f vs direct %.4f", chain, oracle) + fmt(", relative gap %.3f (< 0.10)", rel)};
}

Outcome activation_identification() {
  const int T = 300;
  Rng data(2024);
  Eigen::MatrixXd X(T, 2);
  Eigen::VectorXd y(T);
  for (int t = 0; t < T; ++t) {
    X(t, 0) = draw_normal(data);
    X(t, 1) = draw_normal(data);
    y[t] = 0.5 * X(t, 0) + 2.0 * std::tanh(1.5 * X(t, 0) - 1.0 * X(t, 1) + 0.2) + 0.1 * draw_normal(data);
  }
  ChainConfig cfg = desk_chain(11);
  cfg.sv_enabled = false;
  const ChainOutput out = run_chain(y, X, NetworkShape{2, {1}}, cfg);
  int tanh_count = 0;
  for (const auto& p : out.params) tanh_count += p.mixture.indicators[0][0] == Activation::Tanh;
  const double freq = static_cast<double>(tanh_count) / out.n_draws();
  return {freq > 0.9, fmt("posterior frequency of tanh %.3f over %d draws (> 0.9)", freq, out.n_draws())};
}

Outcome linear_reduction() {
  const LpInputs in = synth_inputs(DgpKind::Linear, 400, 31);
  const SequentialFit fit = estimate_sequential(in.y, in.zeta, in.covariates, 2, desk_chain(3, false));
  NlpOptions opts;
  opts.taus = {-1.0, 1.0, 3.0};
  NlpResult r = unconditional_nlp(fit, opts);
  for (double tau : opts.taus) r = rescale_for_comparison(r, tau);
  bool identical = true;
  for (int h = 0; h < r.num_horizons(); ++h)
    for (int j = 0; j < r.num_draws(); ++j) {
      const double psi = fit.chains[h].params[j].linear_coef[0];
      for (int k = 0; k < 3; ++k) identical = identical && r.value(h, k, j) == psi;
    }
  const Eigen::MatrixXd Z = fit.datasets[0].design();
  const Eigen::VectorXd b = Z.colPivHouseholderQr().solve(fit.datasets[0].target);
  double psi_mean = 0.0;
  for (const auto& p : fit.chains[0].params) psi_mean += p.linear_coef[0];
  psi_mean /= fit.chains[0].n_draws();
  const double gap = std::abs(psi_mean - b[0]);
  return {identical && gap < 0.1, std::string(identical ? "per-draw NLP/tau identical across tau" : "NLP/tau differs") +
                                      fmt(", posterior mean psi_0 %.4f vs OLS %.4f", psi_mean, b[0]) +
                                      fmt(" (gap %.4f < 0.1)", gap)};
}

Outcome sign_asymmetry() {
  const LpInputs in = synth_inputs(DgpKind::SignAsymmetric, 500, 7);
  const SequentialFit fit = estimate_sequential(in.y, in.zeta, in.covariates, 4, desk_chain(5));
  NlpOptions opts;
  opts.taus = {1.0, -1.0};
  const NlpResult r = rescale_for_comparison(unconditional_nlp(fit, opts), -1.0);
  const NlpBand pos = r.band(0, 0);
  const NlpBand neg = r.band(0, 1);
  const bool disjoint = pos.q16 > neg.q84 || neg.q16 > pos.q84;
  const double e_pos = std::abs(pos.q50 - 1.0), e_neg = std::abs(neg.q50 - 0.0);
  return {disjoint && e_pos < 0.25 && e_neg < 0.25,
          fmt("h=0 tau=+1 band [%.3f, %.3f], rescaled tau=-1 band [%.3f, %.3f]", pos.q16, pos.q84, neg.q16, neg.q84) +
              fmt("; medians %.3f (truth 1), %.3f (truth 0)", pos.q50, neg.q50)};
}

Outcome proportionality() {
  NlpOptions opts;
  opts.taus = {1.0, 3.0};

  const LpInputs lin = synth_inputs(DgpKind::Linear, 500, 13);
  const SequentialFit lf = estimate_sequential(lin.y, lin.zeta, lin.covariates, 6, desk_chain(9));
  NlpResult lr = unconditional_nlp(lf, opts);
  lr = rescale_for_comparison(rescale_for_comparison(lr, 1.0), 3.0);
  double worst = 0.0;
  for (int h = 0; h <= 6; ++h) worst = std::max(worst, std::abs(lr.band(h, 0).q50 - lr.band(h, 1).q50));

  const LpInputs sz = synth_inputs(DgpKind::SizeNonlinear, 500, 13);
  const SequentialFit sf = estimate_sequential(sz.y, sz.zeta, sz.covariates, 0, desk_chain(9));
  NlpResult sr = unconditional_nlp(sf, opts);
  sr = rescale_for_comparison(rescale_for_comparison(sr, 1.0), 3.0);
  const double size_gap = std::abs(sr.band(0, 1).q50 - sr.band(0, 0).q50);
  return {worst < 0.1 && size_gap > 1.0,
          fmt("linear: max |median gap| over h<=6 %.3f (< 0.1); size_nonlinear h=0 gap %.3f (> 1.0)", worst, size_gap)};
}

Outcome structural_identification() {
  DgpSpec d;
  d.kind = DgpKind::RecursiveVar;
  d.T = 5000;
  d.seed = 77;
  const SynthData s = generate(d);
  VarSpec spec;
  spec.lags = 2;
  spec.variable_order = s.names;
  const VarFit fit = fit_var_ols(s.panel, spec);
  const Eigen::MatrixXd E = structural_shocks(fit.residuals, fit.sigma);
  const Eigen::MatrixXd EtE = E.transpose() * E / static_cast<double>(E.rows());
  const double id_gap = (EtE - Eigen::MatrixXd::Identity(E.cols(), E.cols())).cwiseAbs().maxCoeff();
  const Eigen::VectorXd est = E.col(0);
  const Eigen::VectorXd truth = s.true_shocks.col(0).tail(est.size());
  const Eigen::ArrayXd a = est.array() - est.mean(), b = truth.array() - truth.mean();
  const double corr = (a * b).sum() / std::sqrt(a.square().sum() * b.square().sum());
  return {corr > 0.95 && id_gap < 0.05, fmt("corr(extracted, true) %.4f (> 0.95), max |E'E/(T-p) - I| %.4f (< 0.05)",
                                            corr, id_gap)};
}

Outcome determinism_and_interfaces() {
  const fs::path dir = fs::temp_directory_path() / "bnnlp_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  DgpSpec d;
  d.kind = DgpKind::SignAsymmetric;
  d.T = 200;
  const SynthData s = generate(d);
  write_panel_csv(Panel{s.panel, s.names, s.dates}, dir / "panel.csv");
  RunConfig cfg;
  cfg.dataset.csv_path = (dir / "panel.csv").string();
  cfg.dataset.variable_order = s.names;
  for (const auto& n : s.names) cfg.dataset.transforms[n] = Transform::Level;
  cfg.dataset.sample_start = s.dates.front();
  cfg.dataset.sample_end = s.dates.back();
  cfg.var.lags = 2;
  cfg.horizon = 2;
  cfg.chain.n_iter = 300;
  cfg.chain.n_burn = 150;
  cfg.paths = 100;
  cfg.targets = {"y"};

  write_outputs(cfg, run_pipeline(cfg), dir / "a");
  cfg.threads = 2;
  write_outputs(cfg, run_pipeline(cfg), dir / "b");
  const bool same = read_file(dir / "a" / "y.csv") == read_file(dir / "b" / "y.csv");
  // the manifests differ only in the recorded thread count
  nlohmann::json ma = nlohmann::json::parse(read_file(dir / "a" / "manifest.json"));
  nlohmann::json mb = nlohmann::json::parse(read_file(dir / "b" / "manifest.json"));
  mb["config"]["threads"] = 1;
  const bool same_manifest = ma == mb;

  cfg.threads = 1;
  write_outputs(cfg, run_pipeline(cfg), dir / "c");
  const bool byte_identical = read_file(dir / "a" / "y.csv") == read_file(dir / "c" / "y.csv") &&
                              read_file(dir / "a" / "manifest.json") == read_file(dir / "c" / "manifest.json");

  NlpResult g;
  g.taus = {1.0, -1.0, 0.0};
  g.multipliers = g.taus;
  g.linear.resize(2, 5);
  for (int h = 0; h < 2; ++h)
    for (int j = 0; j < 5; ++j) g.linear(h, j) = (j + 1.0) * (h + 1.0);
  g.nonlinear = {Eigen::MatrixXd::Zero(2, 5), Eigen::MatrixXd::Constant(2, 5, 0.5), Eigen::MatrixXd::Zero(2, 5)};
  const bool golden = results_csv("y", g) == read_file(fs::path(BNNLP_GOLDEN_DIR) / "results.csv");

  const bool round_trip = run_config_from_json(nlohmann::json::parse(to_json(cfg).dump())) == cfg &&
                          run_config_from_json(ma.at("config")) == cfg;
  fs::remove_all(dir);
  return {byte_identical && same && same_manifest && golden && round_trip,
          std::string("reruns byte-identical: ") + (byte_identical ? "yes" : "no") +
              ", thread-count invariant: " + (same && same_manifest ? "yes" : "no") +
              ", golden CSV: " + (golden ? "match" : "mismatch") + ", config round trip: " + (round_trip ? "yes" : "no")};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 for no limit
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "forward/gradient correctness", 10, forward_and_gradient},
      {2, "conjugate block vs ridge posterior", 30, conjugate_block},
      {3, "HMC kernel validity", 60, hmc_kernel},
      {4, "horseshoe prior predictive", 60, horseshoe_prior},
      {5, "activation identification", 300, activation_identification},
      {6, "linear-reduction equivalence", 0, linear_reduction},
      {7, "sign-asymmetry recovery", 900, sign_asymmetry},
      {8, "proportionality recovery", 0, proportionality},
      {9, "structural identification", 0, structural_identification},
      {10, "determinism and interfaces", 0, determinism_and_interfaces},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.pass;
    std::string timing = fmt("%.1f s", secs);
    if (c.limit_seconds > 0) {
      timing += fmt(" (limit %.0f s)", c.limit_seconds);
      pass = pass && secs < c.limit_seconds;
    }
    std::printf("[%s] %2d %s: %s; %s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
