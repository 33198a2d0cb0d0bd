#pragma once

#include <array>
#include <cstdint>

namespace selsample {

/// Deterministic pseudo-random stream (xoshiro256++ seeded via splitmix64).
///
/// All randomized behavior in the library flows through this type so that
/// runs are reproducible bit-for-bit across platforms. A state is owned by
/// exactly one task at a time; substreams derived from (seed, stream id)
/// give independent, order-free streams for per-probe / per-pixel work.
class RngState {
 public:
  explicit RngState(std::uint64_t seed) { reseed(seed); }

  /// Independent stream keyed by (seed, stream).
  static RngState substream(std::uint64_t seed, std::uint64_t stream) {
    RngState r(mix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1)));
    return r;
  }

  std::uint64_t next_u64() {
    ++calls_;
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform index in [0, bound). Consumes exactly one draw for any bound >= 1.
  std::size_t uniform_index(std::size_t bound) {
    const std::uint64_t u = next_u64();
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(u) * bound) >> 64);
  }

  /// Number of raw draws consumed so far (used to audit draw accounting).
  std::uint64_t calls() const { return calls_; }

 private:
  void reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      w = mix64(x);
    }
  }

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
  std::uint64_t calls_ = 0;
};

/// Fresh 64-bit seed for an independent component of an experiment.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return RngState::substream(seed, stream).next_u64();
}

/// Stream ids used to split one experiment seed into independent substreams.
namespace stream_id {
inline constexpr std::uint64_t kProcess = 1;  // candidate draws + phi ties
inline constexpr std::uint64_t kProbes = 2;   // probe set
inline constexpr std::uint64_t kEval = 3;     // per-probe prediction ties
inline constexpr std::uint64_t kRaster = 4;   // per-pixel prediction ties
}  // namespace stream_id

}  // namespace selsample
