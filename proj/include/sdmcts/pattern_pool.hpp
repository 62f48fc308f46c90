#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "description.hpp"

namespace sdmcts {

enum PoolSource : std::uint8_t { from_tree = 1, from_memory = 2 };

struct PoolEntry {
    Subgroup subgroup;
    double phi = 0;
    std::uint8_t sources = 0;  // PoolSource bits
};

/// Patterns collected by a searcher (tree nodes plus rollout memory),
/// deduplicated by description. Insertion order is kept so iteration is
/// deterministic.
class PatternPool {
  public:
    /// Returns true when the description was not pooled before.
    bool add(Subgroup sg, double phi, PoolSource source) {
        auto key = canonical_key(sg.description);
        auto [it, fresh] = index_.try_emplace(std::move(key), entries_.size());
        if (fresh) {
            entries_.push_back({std::move(sg), phi, static_cast<std::uint8_t>(source)});
            return true;
        }
        auto& e = entries_[it->second];
        if (phi > e.phi) e.phi = phi;
        e.sources |= source;
        return false;
    }

    bool contains(const Description& d) const { return index_.count(canonical_key(d)) > 0; }
    const PoolEntry* find(const Description& d) const {
        auto it = index_.find(canonical_key(d));
        return it == index_.end() ? nullptr : &entries_[it->second];
    }

    const std::vector<PoolEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    std::size_t count_from(PoolSource s) const {
        std::size_t n = 0;
        for (const auto& e : entries_) n += (e.sources & s) ? 1 : 0;
        return n;
    }

    /// Highest phi in the pool; `fallback` when empty.
    double best_phi(double fallback = 0) const {
        double best = fallback;
        bool any = false;
        for (const auto& e : entries_)
            if (!any || e.phi > best) best = e.phi, any = true;
        return best;
    }

  private:
    std::vector<PoolEntry> entries_;
    std::unordered_map<DescriptionKey, std::size_t> index_;
};

}  // namespace sdmcts
