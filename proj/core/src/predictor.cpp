#include "selsample/predictor.hpp"

#include <algorithm>
#include <stdexcept>

namespace selsample {

namespace {

/// Multiplicity table over the small label universes seen here.
class LabelCounts {
 public:
  void add(Label l) {
    if (l >= counts_.size()) counts_.resize(l + 1, 0);
    ++counts_[l];
    if (counts_[l] > max_) max_ = counts_[l];
  }
  void remove(Label l) {
    --counts_[l];
    // max_ may now be stale; recompute lazily only when asked.
    stale_ = true;
  }
  std::uint32_t max_multiplicity() const {
    if (stale_) {
      max_ = 0;
      for (std::uint32_t c : counts_) max_ = std::max(max_, c);
      stale_ = false;
    }
    return max_;
  }
  std::uint32_t max_if_added(Label l) const {
    const std::uint32_t existing = l < counts_.size() ? counts_[l] : 0;
    return std::max(max_multiplicity(), existing + 1);
  }

 private:
  std::vector<std::uint32_t> counts_;
  mutable std::uint32_t max_ = 0;
  mutable bool stale_ = false;
};

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > cap) return cap + 1;
  }
  return c;
}

/// Visits every free_slots-sized subset of tie_group in lexicographic order;
/// fn gets the subset as positions into tie_group. Returns false if the
/// member count exceeds the cap (nothing visited).
template <typename Fn>
bool for_each_completion(const TieFamily& family, Fn&& fn) {
  const std::size_t t = family.tie_group.size();
  const std::size_t f = family.free_slots;
  if (binomial_capped(t, f, kTieEnumerationCap) > kTieEnumerationCap) {
    return false;
  }
  std::vector<std::uint32_t> pick(f);
  for (std::size_t i = 0; i < f; ++i) pick[i] = static_cast<std::uint32_t>(i);
  if (f == 0) {
    fn(pick);
    return true;
  }
  while (true) {
    fn(pick);
    // next lexicographic combination
    std::size_t i = f;
    while (i > 0 && pick[i - 1] == t - f + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < f; ++j) pick[j] = pick[j - 1] + 1;
  }
  return true;
}

/// Greedy fill of the free slots: each slot takes a remaining tie-group
/// member whose label minimizes the running mode frequency. `choose` picks
/// among equally good candidates (deterministic-first for value queries,
/// uniform for selection).
template <typename Choose>
std::vector<std::uint32_t> greedy_fill(const TieFamily& family, SampleView z,
                                       LabelCounts counts, Choose&& choose) {
  std::vector<std::uint32_t> remaining = family.tie_group;
  std::vector<std::uint32_t> chosen;
  chosen.reserve(family.free_slots);
  for (std::uint32_t slot = 0; slot < family.free_slots; ++slot) {
    std::uint32_t best = UINT32_MAX;
    std::vector<std::size_t> best_at;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const std::uint32_t would = counts.max_if_added(z[remaining[i]].label);
      if (would < best) {
        best = would;
        best_at.clear();
      }
      if (would == best) best_at.push_back(i);
    }
    const std::size_t pick = best_at[choose(best_at.size())];
    counts.add(z[remaining[pick]].label);
    chosen.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + pick);
  }
  return chosen;
}

LabelCounts prefix_counts(const TieFamily& family, SampleView z) {
  LabelCounts counts;
  for (std::uint32_t i : family.prefix) counts.add(z[i].label);
  return counts;
}

}  // namespace

std::vector<std::uint32_t> nearest_indices(const Point& x, SampleView z) {
  if (z.empty()) throw std::invalid_argument("nearest_indices: empty sample set");
  double best = squared_distance(x, z[0].point);
  std::vector<std::uint32_t> out{0};
  for (std::size_t i = 1; i < z.size(); ++i) {
    const double d2 = squared_distance(x, z[i].point);
    if (d2 < best) {
      best = d2;
      out.clear();
    }
    if (d2 == best) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

Label predict_nn(const Point& x, SampleView z, RngState& rng) {
  const auto idx = nearest_indices(x, z);
  return z[idx[rng.uniform_index(idx.size())]].label;
}

std::size_t TieFamily::member_count() const {
  return binomial_capped(tie_group.size(), free_slots, kTieEnumerationCap);
}

TieFamily k_nearest_tie_family(const Point& x, SampleView z, std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("k_nearest_tie_family: k must be >= 1");
  if (z.size() < k) {
    throw std::invalid_argument("k_nearest_tie_family: fewer samples than k");
  }
  std::vector<double> d2(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    d2[i] = squared_distance(x, z[i].point);
  }
  std::vector<double> order = d2;
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end());
  const double boundary = order[k - 1];

  TieFamily family;
  family.k = k;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (d2[i] < boundary) {
      family.prefix.push_back(static_cast<std::uint32_t>(i));
    } else if (d2[i] == boundary) {
      family.tie_group.push_back(static_cast<std::uint32_t>(i));
    }
  }
  family.free_slots = k - static_cast<std::uint32_t>(family.prefix.size());
  if (family.tie_group.size() == family.free_slots) {
    // Every boundary sample is forced: fold into the prefix.
    family.prefix.insert(family.prefix.end(), family.tie_group.begin(),
                         family.tie_group.end());
    std::sort(family.prefix.begin(), family.prefix.end());
    family.tie_group.clear();
    family.free_slots = 0;
  }
  return family;
}

std::uint32_t min_mode_frequency(const TieFamily& family, SampleView z) {
  const LabelCounts base = prefix_counts(family, z);
  std::uint32_t best = UINT32_MAX;
  const bool enumerated =
      for_each_completion(family, [&](const std::vector<std::uint32_t>& pick) {
        LabelCounts counts = base;
        for (std::uint32_t p : pick) counts.add(z[family.tie_group[p]].label);
        best = std::min(best, counts.max_multiplicity());
      });
  if (enumerated) return best;
  LabelCounts counts = base;
  const auto chosen = greedy_fill(family, z, counts,
                                  [](std::size_t) -> std::size_t { return 0; });
  for (std::uint32_t i : chosen) counts.add(z[i].label);
  return counts.max_multiplicity();
}

std::vector<std::uint32_t> select_ambiguous_set(const TieFamily& family,
                                                SampleView z, RngState& rng) {
  const LabelCounts base = prefix_counts(family, z);
  std::uint32_t best = UINT32_MAX;
  std::vector<std::vector<std::uint32_t>> minimizers;
  const bool enumerated =
      for_each_completion(family, [&](const std::vector<std::uint32_t>& pick) {
        LabelCounts counts = base;
        for (std::uint32_t p : pick) counts.add(z[family.tie_group[p]].label);
        const std::uint32_t freq = counts.max_multiplicity();
        if (freq < best) {
          best = freq;
          minimizers.clear();
        }
        if (freq == best) minimizers.push_back(pick);
      });

  std::vector<std::uint32_t> member = family.prefix;
  if (enumerated) {
    const auto& pick = minimizers[rng.uniform_index(minimizers.size())];
    for (std::uint32_t p : pick) member.push_back(family.tie_group[p]);
  } else {
    const auto chosen = greedy_fill(
        family, z, base, [&](std::size_t n) { return rng.uniform_index(n); });
    member.insert(member.end(), chosen.begin(), chosen.end());
  }
  std::sort(member.begin(), member.end());
  return member;
}

Label predict_mnn(const Point& x, SampleView z, std::uint32_t m,
                  RngState& rng) {
  if (z.size() < m) {
    throw std::invalid_argument("predict_mnn: fewer samples than m");
  }
  if (m == 1) return predict_nn(x, z, rng);
  for (const LabeledSample& s : z) {
    if (s.point == x) return s.label;
  }
  const TieFamily family = k_nearest_tie_family(x, z, m);
  const auto member = select_ambiguous_set(family, z, rng);

  LabelCounts counts;
  for (std::uint32_t i : member) counts.add(z[i].label);
  const std::uint32_t freq = counts.max_multiplicity();
  std::vector<Label> modes;
  std::vector<Label> seen;
  for (std::uint32_t i : member) {
    const Label l = z[i].label;
    if (std::find(seen.begin(), seen.end(), l) != seen.end()) continue;
    seen.push_back(l);
    std::uint32_t c = 0;
    for (std::uint32_t j : member) c += (z[j].label == l);
    if (c == freq) modes.push_back(l);
  }
  std::sort(modes.begin(), modes.end());
  return modes[rng.uniform_index(modes.size())];
}

}  // namespace selsample
