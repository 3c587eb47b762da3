#pragma once

// Seeded random streams. A stream is named by (seed, stream_id); the same
// pair yields the same draws on every platform because the engine
// (mt19937_64), its seeding (std::seed_seq) and the transforms below are all
// fully specified.

#include <complex>
#include <cstdint>
#include <random>

namespace swipt {

struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Derived stream for sub-task `index`; children of distinct parents or
  /// distinct indices do not collide in practice.
  RngStream child(std::uint64_t index) const;
  bool operator==(const RngStream&) const = default;
};

std::uint64_t splitmix64(std::uint64_t x);

class Generator {
 public:
  explicit Generator(const RngStream& stream);

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();
  /// Circular-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance = 1.0);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace swipt
