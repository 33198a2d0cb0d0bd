#pragma once

#include <cstdint>
#include <vector>

#include "selsample/rng.hpp"
#include "selsample/sample_set.hpp"

namespace selsample {

/// Above this many candidate completions the ambiguous-set search switches
/// from exhaustive subset enumeration to greedy fill.
inline constexpr std::size_t kTieEnumerationCap = 1000;

/// All 0-based positions achieving the minimum distance to x, ascending.
/// Distances compare exactly (squared, no epsilon). Throws on empty z.
std::vector<std::uint32_t> nearest_indices(const Point& x, SampleView z);

/// Nearest neighbor prediction; exact ties are broken uniformly at random
/// (consumes exactly one rng draw). Throws on empty z.
Label predict_nn(const Point& x, SampleView z, RngState& rng);

/// Structure of the K-sets of z minimizing distance to x:
/// every minimizing K-set = `prefix` plus any `free_slots`-sized subset of
/// `tie_group`. When every boundary-distance sample is forced (the tie group
/// would exactly fill the free slots) the group is folded into the prefix,
/// so tie_group is empty whenever the family has a single member.
struct TieFamily {
  std::vector<std::uint32_t> prefix;     // strictly-nearer positions, ascending
  std::vector<std::uint32_t> tie_group;  // boundary-distance positions, ascending
  std::uint32_t free_slots = 0;
  std::uint32_t k = 0;

  /// Number of K-sets in the family: C(|tie_group|, free_slots).
  /// Saturates at kTieEnumerationCap + 1.
  std::size_t member_count() const;
};

/// Tie structure of the K nearest samples to x under exact distance
/// comparison. Requires |z| >= k >= 1.
TieFamily k_nearest_tie_family(const Point& x, SampleView z, std::uint32_t k);

/// Smallest mode frequency achievable by a member of the family (exhaustive
/// when member_count() <= kTieEnumerationCap, greedy otherwise). Rng-free.
std::uint32_t min_mode_frequency(const TieFamily& family, SampleView z);

/// A member of the family minimizing mode frequency; among minimizers the
/// choice is uniform at random. Positions returned ascending. Falls back to
/// greedy fill past the enumeration cap.
std::vector<std::uint32_t> select_ambiguous_set(const TieFamily& family,
                                                SampleView z, RngState& rng);

/// m-nearest-neighbors prediction: the mode of the selected ambiguous m-set,
/// mode ties broken uniformly at random. If x equals a sample exactly, that
/// sample's label is returned. Requires |z| >= m.
Label predict_mnn(const Point& x, SampleView z, std::uint32_t m, RngState& rng);

}  // namespace selsample
