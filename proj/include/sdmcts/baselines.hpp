#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_set>
#include <vector>

#include "dataset.hpp"
#include "description.hpp"
#include "error.hpp"
#include "measures.hpp"
#include "pattern_pool.hpp"
#include "random.hpp"
#include "refinement.hpp"
#include "result_set.hpp"

namespace sdmcts {

struct BeamConfig {
    std::size_t width = 10;
    std::size_t max_length = 5;
    std::size_t min_support = 10;
    MeasureSpec measure;
    /// Number of refinement levels; 0 means max_length.
    std::size_t depth = 0;
};

/// Level-wise beam search over direct refinements. Every evaluated pattern
/// lands in the pool; the best `width` of each level (deduplicated) seed the
/// next level.
inline PatternPool beam_search(const Dataset& data, const BeamConfig& cfg) {
    if (cfg.width < 1) throw ConfigError("beam width must be >= 1");
    if (cfg.min_support > data.object_count()) throw ConfigError("minimum support exceeds the number of objects");
    PatternPool pool;
    const std::size_t depth = cfg.depth ? cfg.depth : cfg.max_length;
    RefineOptions opt{ExpandKind::direct, {cfg.min_support, cfg.max_length}, nullptr, false, std::nullopt};
    std::vector<Subgroup> beam{{Description{}, data.all_objects()}};
    for (std::size_t level = 0; level < depth && !beam.empty(); ++level) {
        std::vector<ResultEntry> next;
        std::unordered_set<DescriptionKey> seen;
        for (const auto& s : beam) {
            for (const auto& r : refinements(s, data, opt)) {
                Subgroup child = apply(s, r, data);
                if (!seen.insert(canonical_key(child.description)).second) continue;
                double phi = evaluate(cfg.measure, child, data);
                pool.add(child, phi, from_tree);
                next.push_back({std::move(child.description), std::move(child.extent), phi, 0});
            }
        }
        std::stable_sort(next.begin(), next.end(), ranks_before);
        if (next.size() > cfg.width) next.resize(cfg.width);
        beam.clear();
        for (auto& e : next) beam.push_back({std::move(e.description), std::move(e.extent)});
    }
    return pool;
}

/// Complete frequent lattice (root included) within max_length, each
/// description visited once through lectic-order depth-first search.
inline PatternPool exhaustive_dfs(const Dataset& data, std::size_t min_support, std::size_t max_length,
                                  const MeasureSpec& measure, std::size_t node_cap = 5'000'000) {
    if (min_support > data.object_count()) throw ConfigError("minimum support exceeds the number of objects");
    if (min_support < 1) throw ConfigError("minimum support must be >= 1");
    PatternPool pool;
    lectic_dfs(data, {min_support, max_length}, [&](const Subgroup& s, const std::optional<Provenance>&) {
        if (pool.size() >= node_cap)
            throw NodeCapExceeded("exhaustive enumeration exceeded " + std::to_string(node_cap) + " patterns");
        pool.add(s, evaluate(measure, s, data), from_tree);
        return true;
    });
    return pool;
}

/// Draws a random object, then a random generalization of its point
/// description: each attribute is dropped with probability 1/2, otherwise
/// kept (nominal) or widened to a uniformly random interval around the
/// object's value (numerical). Random restrictions are then dropped until
/// the effective length fits. Infrequent draws are discarded.
inline Description sample_generalization(const Dataset& data, Rng& rng, std::size_t max_length, std::size_t& object) {
    object = uniform_index(rng, data.object_count());
    std::vector<Restriction> rs;
    for (std::uint32_t a = 0; a < data.attribute_count(); ++a) {
        if (coin(rng)) continue;
        const auto& m = data.attribute(a);
        ValueCode c = data.code(object, a);
        if (!m.is_numerical()) {
            rs.push_back({a, c, c});
        } else {
            auto lo = static_cast<ValueCode>(uniform_index(rng, c + 1));
            auto hi = static_cast<ValueCode>(c + uniform_index(rng, m.domain_size() - c));
            rs.push_back({a, lo, hi});
        }
    }
    Description d = Description::make(std::move(rs), data);
    while (d.effective_length(data) > max_length) {
        const auto& r = d.restrictions();
        d = d.without(r[uniform_index(rng, r.size())].attribute);
    }
    return d;
}

inline PatternPool uniform_sampler(const Dataset& data, std::size_t draws, std::size_t min_support,
                                   const MeasureSpec& measure, std::uint64_t seed,
                                   std::size_t max_length = std::numeric_limits<std::size_t>::max()) {
    if (draws < 1) throw ConfigError("sampler needs at least one draw");
    PatternPool pool;
    Rng rng(derive_seed(seed, seed_stream::search));
    for (std::size_t i = 0; i < draws; ++i) {
        std::size_t object = 0;
        auto sg = Subgroup::of(sample_generalization(data, rng, max_length, object), data);
        if (sg.support() < min_support) continue;
        double phi = evaluate(measure, sg, data);
        pool.add(std::move(sg), phi, from_tree);
    }
    return pool;
}

}  // namespace sdmcts
