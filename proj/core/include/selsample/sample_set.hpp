#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "selsample/domain.hpp"

namespace selsample {

/// One labeled sample; `index` is the 1-based insertion order.
struct LabeledSample {
  Point point;
  Label label = 0;
  std::uint32_t index = 0;
};

/// Hash-chain step shared by SampleSet and VoronoiIndex so both sides can
/// agree on "built from the same samples" in O(1).
inline std::uint64_t hash_append(std::uint64_t h, const LabeledSample& s) {
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  h = mix(h ^ std::bit_cast<std::uint64_t>(s.point.x));
  h = mix(h ^ std::bit_cast<std::uint64_t>(s.point.y));
  h = mix(h ^ ((std::uint64_t(s.point.dim) << 32) | s.label));
  return h;
}

inline constexpr std::uint64_t kEmptyHash = 0xcbf29ce484222325ULL;

/// Non-owning, immutable window over a sample sequence, carrying the content
/// hash of exactly the covered prefix. All queries in the library take views
/// so that evaluation over Z_n prefixes is free.
struct SampleView {
  const LabeledSample* data = nullptr;
  std::size_t count = 0;
  std::uint64_t hash = kEmptyHash;

  std::size_t size() const { return count; }
  bool empty() const { return count == 0; }
  const LabeledSample& operator[](std::size_t i) const { return data[i]; }
  const LabeledSample* begin() const { return data; }
  const LabeledSample* end() const { return data + count; }
};

/// Append-only ordered sample sequence Z_n. Duplicate coordinates are
/// permitted. Queries on a frozen snapshot are safe concurrently; appends
/// must not interleave with queries without external ordering.
class SampleSet {
 public:
  SampleSet() { prefix_hash_.push_back(kEmptyHash); }

  void append(const Point& p, Label label) {
    LabeledSample s{p, label, static_cast<std::uint32_t>(samples_.size() + 1)};
    prefix_hash_.push_back(hash_append(prefix_hash_.back(), s));
    samples_.push_back(s);
  }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }
  const LabeledSample& back() const { return samples_.back(); }

  std::uint64_t content_hash() const { return prefix_hash_.back(); }

  SampleView view() const { return prefix(samples_.size()); }

  /// View of the first n samples (Z_n).
  SampleView prefix(std::size_t n) const {
    return SampleView{samples_.data(), n, prefix_hash_[n]};
  }

 private:
  std::vector<LabeledSample> samples_;
  std::vector<std::uint64_t> prefix_hash_;  // prefix_hash_[k] = hash of Z_k
};

/// True iff some sample's coordinates equal x exactly.
bool contains_point(SampleView z, const Point& x);

}  // namespace selsample
