#pragma once
// Deterministic random streams. One master seed fans out to independent
// named sub-streams, so components can draw without coordinating and two
// runs with the same seed are reproducible on any platform. Draw functions
// are hand-rolled because std:: distributions are implementation-defined.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace adclick {

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view stream_name);

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Index drawn proportionally to weights; weights need not be normalized.
  // Throws when the total mass is not strictly positive.
  std::size_t categorical(const std::vector<double>& weights);

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 eng_;
};

} // namespace adclick
