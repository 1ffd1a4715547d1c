#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <vector>

namespace percolab {

/// Union by size with path compression.
class DisjointSets {
public:
  explicit DisjointSets(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n) {
    parent_.resize(n);
    size_.assign(n, 1);
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::size_t element_count() const noexcept { return parent_.size(); }

  std::uint32_t find(std::uint32_t v) noexcept {
    std::uint32_t root = v;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[v] != root) {
      const std::uint32_t up = parent_[v];
      parent_[v] = root;
      v = up;
    }
    return root;
  }

  /// Returns false when already joined.
  bool unite(std::uint32_t a, std::uint32_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::uint32_t size_of(std::uint32_t v) noexcept { return size_[find(v)]; }

private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

/// Disjoint sets plus the multiset of component sizes, so the largest and
/// second-largest components and the number of components of size >= s for
/// a fixed list of thresholds are exact after every union.
class ComponentTracker {
public:
  ComponentTracker() = default;
  ComponentTracker(std::size_t n, std::span<const std::size_t> thresholds) { reset(n, thresholds); }

  void reset(std::size_t n, std::span<const std::size_t> thresholds) {
    sets_.reset(n);
    thresholds_.assign(thresholds.begin(), thresholds.end());
    sizes_.clear();
    if (n > 0) sizes_[1] = n;
    counts_.assign(thresholds_.size(), 0);
    for (std::size_t i = 0; i < thresholds_.size(); ++i) counts_[i] = thresholds_[i] <= 1 ? n : 0;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = sets_.find(a);
    b = sets_.find(b);
    if (a == b) return false;
    const std::size_t sa = sets_.size_of(a);
    const std::size_t sb = sets_.size_of(b);
    sets_.unite(a, b);
    remove_size(sa);
    remove_size(sb);
    ++sizes_[sa + sb];
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
      const std::size_t s = thresholds_[i];
      counts_[i] += (sa + sb >= s) ? 1 : 0;
      counts_[i] -= (sa >= s ? 1 : 0) + (sb >= s ? 1 : 0);
    }
    return true;
  }

  std::size_t largest() const noexcept { return sizes_.empty() ? 0 : sizes_.begin()->first; }

  std::size_t second_largest() const noexcept {
    if (sizes_.empty()) return 0;
    auto it = sizes_.begin();
    if (it->second >= 2) return it->first;
    ++it;
    return it == sizes_.end() ? 0 : it->first;
  }

  /// Components of size >= thresholds[i].
  std::size_t count_at_least(std::size_t i) const noexcept { return counts_[i]; }

  DisjointSets& sets() noexcept { return sets_; }

private:
  void remove_size(std::size_t s) {
    auto it = sizes_.find(s);
    if (--it->second == 0) sizes_.erase(it);
  }

  DisjointSets sets_;
  std::vector<std::size_t> thresholds_;
  std::map<std::size_t, std::size_t, std::greater<>> sizes_;  // size -> multiplicity
  std::vector<std::size_t> counts_;
};

}  // namespace percolab
