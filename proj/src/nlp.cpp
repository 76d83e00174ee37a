#include "bnnlp/nlp.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "bnnlp/errors.hpp"
#include "bnnlp/rng.hpp"
#include "bnnlp/stats.hpp"

namespace bnnlp {

int NlpResult::tau_index(double tau) const {
  for (std::size_t k = 0; k < taus.size(); ++k)
    if (taus[k] == tau) return static_cast<int>(k);
  throw InvalidInput("NlpResult: shock size " + std::to_string(tau) + " not evaluated");
}

double NlpResult::value(int h, int k, int j) const {
  return linear(h, j) * multipliers[static_cast<std::size_t>(k)] + nonlinear[static_cast<std::size_t>(k)](h, j);
}

Eigen::VectorXd NlpResult::values(int h, int k) const {
  Eigen::VectorXd v(num_draws());
  for (int j = 0; j < num_draws(); ++j) v[j] = value(h, k, j);
  return v;
}

NlpBand NlpResult::band(int h, int k) const {
  const Eigen::VectorXd v = values(h, k);
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end());
  return {quantile_sorted(sorted, 0.16), quantile_sorted(sorted, 0.50), quantile_sorted(sorted, 0.84)};
}

double conditional_nlp(const ChainOutput& chain, int draw, const Eigen::Ref<const Eigen::VectorXd>& x, double tau,
                       int instrument_column) {
  if (draw < 0 || draw >= chain.n_draws()) throw InvalidInput("conditional_nlp: draw index out of range");
  const NetworkParamsd& p = chain.params[static_cast<std::size_t>(draw)];
  if (x.size() != p.linear_coef.size()) throw InvalidInput("conditional_nlp: history has wrong length");
  if (instrument_column < 0 || instrument_column >= x.size())
    throw InvalidInput("conditional_nlp: instrument column out of range");
  if (tau == 0.0) return 0.0;
  const double linear = p.linear_coef[instrument_column] * tau;
  if (!chain.config.network_enabled) return linear;
  Eigen::VectorXd shocked = x;
  Eigen::VectorXd base = x;
  shocked[instrument_column] = tau;
  base[instrument_column] = 0.0;
  return linear + (forward(p, shocked).value - forward(p, base).value);
}

namespace {

// Network part of one (horizon, draw) cell for every tau.
void evaluate_cell(const SequentialFit& fit, const NlpOptions& opts, int h, int j, NlpResult& out) {
  const LpDataset& data = fit.datasets[static_cast<std::size_t>(h)];
  const ChainOutput& chain = fit.chains[static_cast<std::size_t>(h)];
  const NetworkParamsd& p = chain.params[static_cast<std::size_t>(j)];
  out.linear(h, j) = p.linear_coef[LpDataset::instrument_column()];
  if (!chain.config.network_enabled) {
    for (auto& m : out.nonlinear) m(h, j) = 0.0;
    return;
  }

  Rng rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(h), static_cast<std::uint64_t>(j)}));
  std::uniform_int_distribution<Eigen::Index> pick(0, data.rows() - 1);
  const int R = opts.paths;
  const Eigen::Index K = data.num_regressors();
  const int first_slot = data.first_slot_column();
  Eigen::MatrixXd base(R, K);
  for (int r = 0; r < R; ++r) {
    const Eigen::Index t = pick(rng);
    base(r, 0) = 0.0;
    base.row(r).segment(1, data.covariates.cols()) = data.covariates.row(t);
    for (int s = 0; s < h; ++s) base(r, first_slot + s) = (*fit.shocks.residuals[static_cast<std::size_t>(s)])(j, t);
  }
  const Eigen::VectorXd f0 = forward_batch(p, base).f;
  Eigen::MatrixXd shocked = base;
  for (int k = 0; k < out.num_taus(); ++k) {
    const double tau = out.taus[static_cast<std::size_t>(k)];
    if (tau == 0.0) {
      out.nonlinear[static_cast<std::size_t>(k)](h, j) = 0.0;
      continue;
    }
    shocked.col(0).setConstant(tau);
    const Eigen::VectorXd f1 = forward_batch(p, shocked).f;
    out.nonlinear[static_cast<std::size_t>(k)](h, j) = (f1 - f0).mean();
  }
}

}  // namespace

NlpResult unconditional_nlp(const SequentialFit& fit, const NlpOptions& opts) {
  if (opts.paths < 1) throw InvalidInput("unconditional_nlp: path count must be >= 1");
  if (opts.taus.empty()) throw InvalidInput("unconditional_nlp: no shock sizes");
  if (fit.chains.empty() || fit.chains.size() != fit.datasets.size())
    throw InvalidInput("unconditional_nlp: no estimated horizons");
  const int H1 = static_cast<int>(fit.chains.size());
  const int J = fit.chains.front().n_draws();
  for (int h = 0; h < H1; ++h) {
    if (fit.datasets[static_cast<std::size_t>(h)].rows() == 0)
      throw InvalidInput("unconditional_nlp: empty dataset at horizon " + std::to_string(h));
    if (fit.chains[static_cast<std::size_t>(h)].n_draws() != J)
      throw InvalidInput("unconditional_nlp: horizons hold different draw counts");
    if (h > 0 && fit.shocks.num_horizons() < h)
      throw InvalidInput("unconditional_nlp: missing residual draws for shock slots");
  }
  if (J == 0) throw InvalidInput("unconditional_nlp: chains hold no draws");

  NlpResult out;
  out.taus = opts.taus;
  out.multipliers = opts.taus;
  out.linear.resize(H1, J);
  out.nonlinear.assign(opts.taus.size(), Eigen::MatrixXd(H1, J));

  const int n_threads = std::max(1, std::min(opts.threads, J));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (int j = next++; j < J; j = next++)
        for (int h = 0; h < H1; ++h) evaluate_cell(fit, opts, h, j, out);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = J;
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

NlpResult rescale_for_comparison(const NlpResult& result, double tau) {
  if (tau == 0.0) throw InvalidInput("rescale_for_comparison: cannot rescale a zero shock");
  const int k = result.tau_index(tau);
  NlpResult out = result;
  out.multipliers[static_cast<std::size_t>(k)] /= tau;
  out.nonlinear[static_cast<std::size_t>(k)] /= tau;
  return out;
}

}  // namespace bnnlp
