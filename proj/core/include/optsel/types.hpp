#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace optsel {

/// The n x p candidate pool, one design point per row.
using DesignMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class SamplingMode { WithReplacement, WithoutReplacement };

inline std::string_view to_string(SamplingMode mode) noexcept {
  return mode == SamplingMode::WithReplacement ? "with-rep" : "without-rep";
}

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent stream seeds from a
/// master seed and a tuple of coordinates.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0,
                                    std::uint64_t c = 0) noexcept {
  return mix_seed(mix_seed(mix_seed(master ^ mix_seed(a)) ^ b) ^ c);
}

/// Uniform double in [0, 1) built from the top 53 bits, so results do not
/// depend on the standard library's distribution implementation.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return r % bound;
}

/// Standard normal draw (Box-Muller, one output per call).
inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace optsel
