#pragma once

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace hetsense {

/// Derives an independent child seed for stream `stream` of `seed`.
///
/// Every stochastic consumer in the library takes a plain 64-bit seed. When one
/// experiment needs several independent streams (one per trial, per robot
/// team, per noise source) it derives them with this function, so that a
/// stream's output depends only on (seed, stream) and never on the order in
/// which other streams were consumed. The mixer is SplitMix64 applied to the
/// seed and then to the xor with the stream id.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seedable generator with reproducible output on every platform.
///
/// Backed by boost's mt19937_64 and boost's normal/uniform distributions,
/// whose algorithms are fixed in source (unlike the std distributions, which
/// are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double normal(double mean = 0.0, double stddev = 1.0);
  double uniform();  // [0, 1)
  long uniform_int(long lo, long hi);  // inclusive

 private:
  boost::random::mt19937_64 engine_;
};

}  // namespace hetsense
