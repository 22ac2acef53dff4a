#include "mgmc/rng.hpp"

namespace mgmc {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x6d67u};
  engine_.seed(seq);
}

RngStream RngStream::silent() {
  RngStream r;
  r.silent_ = true;
  return r;
}

double RngStream::normal() {
  if (silent_)
    return 0.0;
  return normal_(engine_);
}

double RngStream::uniform(double lo, double hi) {
  if (silent_)
    return lo;
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

void RngStream::fill_normal(Vector &v) {
  if (silent_) {
    v.setZero();
    return;
  }
  for (Index i = 0; i < v.size(); ++i)
    v[i] = normal_(engine_);
}

} // namespace mgmc
