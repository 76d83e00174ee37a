#ifndef BNNLP_RNG_HPP
#define BNNLP_RNG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace bnnlp {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent, reproducible streams.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream seed for a (base seed, coordinates...) cell.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t s = mix_seed(base);
  for (auto c : coords) s = mix_seed(s ^ mix_seed(c + 0x632be59bd9b4e019ULL));
  return s;
}

inline double draw_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline double draw_uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Gamma with shape/rate parameterization.
inline double draw_gamma(Rng& rng, double shape, double rate) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

/// Inverse-Gamma(shape, rate): density proportional to x^{-shape-1} exp(-rate / x).
inline double draw_inverse_gamma(Rng& rng, double shape, double rate) {
  return 1.0 / draw_gamma(rng, shape, rate);
}

inline Eigen::VectorXd draw_normal_vector(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = draw_normal(rng);
  return v;
}

}  // namespace bnnlp

#endif  // BNNLP_RNG_HPP
