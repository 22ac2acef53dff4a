#pragma once

#include "mgmc/sparse.hpp"

#include <cstdint>
#include <random>

namespace mgmc {

/// Seeded normal-variate stream.
///
/// (seed, stream) pairs map to a 64-bit Mersenne twister initialised through
/// std::seed_seq, so chains with different stream ids are decorrelated while
/// identical ids reproduce bit for bit. A silent stream returns zeros, which
/// turns every random update into its deterministic counterpart.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  static RngStream silent();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  bool is_silent() const { return silent_; }

  double normal();
  double uniform(double lo, double hi);
  /// Fills v with independent N(0,1) draws.
  void fill_normal(Vector &v);

  static constexpr const char *algorithm() { return "mt19937_64+seed_seq/normal_distribution"; }

private:
  RngStream() = default;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  bool silent_ = false;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace mgmc
