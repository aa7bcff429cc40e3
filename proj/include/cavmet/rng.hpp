#pragma once

#include <cstdint>
#include <random>

namespace cavmet {

/// Deterministic random stream, split off a master seed by a counter.
///
/// Stream k is seeded with splitmix64(master + (k+1) * golden_gamma), so
/// distinct stream indices never share a sequence and the assignment is
/// independent of how many streams exist or in which order they are created.
/// Uniform doubles are produced from the top 53 bits of the engine output,
/// which keeps the sequence identical across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Standard normal deviate (Box-Muller, pair cached).
  double normal();

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cavmet
