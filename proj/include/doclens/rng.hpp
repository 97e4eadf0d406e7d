#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace doclens {

/// Seedable generator with a portable output stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions below are implemented here rather than taken
/// from <random>, because the standard library distributions are allowed to
/// differ between implementations. Together this makes every seeded run
/// reproduce the same draws on any conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal draw (Marsaglia polar method).
  double normal();

  /// Gamma(shape, 1) draw (Marsaglia-Tsang).
  double gamma(double shape);

  /// Symmetric or asymmetric Dirichlet draw.
  std::vector<double> dirichlet(const std::vector<double>& concentration);

  /// Index drawn proportionally to non-negative weights. Falls back to the
  /// first index when every weight is zero.
  std::size_t categorical(const std::vector<double>& weights);

  /// Derives an independent child seed; used to give each restart or
  /// candidate its own stream.
  std::uint64_t fork_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace doclens
