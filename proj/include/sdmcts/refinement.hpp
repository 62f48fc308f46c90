#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dataset.hpp"
#include "description.hpp"
#include "object_set.hpp"

namespace sdmcts {

enum class ExpandKind { direct, gen, label };

/// How a restriction was tightened: assigning a nominal value, raising the
/// lower bound of an interval (left change) or lowering its upper bound
/// (right change).
enum class ChangeKind : std::uint8_t { nominal, left, right };

/// Position of an action in the total order on restrictions: attributes in
/// declaration order, nominal values in domain order, left before right.
struct Provenance {
    std::uint32_t attribute = 0;
    ChangeKind kind = ChangeKind::nominal;
    ValueCode value = 0;  // nominal value; unused for interval changes

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

inline bool lectic_allows(const std::optional<Provenance>& last, std::uint32_t attribute, ChangeKind kind) {
    if (!last) return true;
    if (attribute != last->attribute) return attribute > last->attribute;
    // Same attribute: only interval changes can follow. After a right change
    // only right changes remain so each interval has a single lectic path.
    if (kind == ChangeKind::nominal || last->kind == ChangeKind::nominal) return false;
    return last->kind == ChangeKind::left || kind == ChangeKind::right;
}

struct RefineLimits {
    std::size_t min_support = 1;
    std::size_t max_length = std::numeric_limits<std::size_t>::max();
};

/// One refinement of a parent subgroup: the restriction that replaces the
/// parent's restriction on `via.attribute`.
struct Refinement {
    Restriction restriction;
    Provenance via;
    std::size_t support = 0;
};

struct RefineOptions {
    ExpandKind kind = ExpandKind::direct;
    RefineLimits limits;
    /// Target-label objects; required for ExpandKind::label.
    const ObjectSet* positives = nullptr;
    /// When set, only lectic successors of this action are produced.
    bool lectic = false;
    std::optional<Provenance> last;
};

namespace detail {

// Walks an interval branch one boundary value at a time. Each step removes
// the objects at the boundary code from the running extent counts.
struct IntervalWalk {
    const Dataset& data;
    const ObjectSet& ext;
    const ObjectSet* positives;
    std::uint32_t attribute;
    bool left;
    ValueCode lo, hi;
    std::size_t support, tp;

    bool can_step() const { return lo < hi; }
    ValueCode boundary() const { return left ? lo : hi; }
    std::size_t removed_at_boundary() const { return intersection_count(ext, data.value_set(attribute, boundary())); }
    std::size_t removed_tp_at_boundary() const {
        return positives ? intersection_count(ext, data.value_set(attribute, boundary()), *positives) : 0;
    }
    void step(std::size_t removed, std::size_t removed_tp) {
        support -= removed;
        tp -= removed_tp;
        if (left) ++lo;
        else --hi;
    }
};

}  // namespace detail

/// Refinements of `parent` under the chosen operator:
///  - direct: every minimal change (one nominal value, one interval step);
///  - gen: each branch keeps stepping until the extent shrinks;
///  - label: as gen, then keeps stepping while the true-positive set stays
///    unchanged, so the result is the tightest member of its branch with
///    that true-positive set.
/// Infrequent results and results longer than max_length are dropped.
inline std::vector<Refinement> refinements(const Subgroup& parent, const Dataset& data, const RefineOptions& opt) {
    std::vector<Refinement> out;
    const auto& ext = parent.extent;
    const std::size_t support = ext.count();
    if (support < opt.limits.min_support) return out;
    const std::size_t base_len = parent.description.effective_length(data);
    const ObjectSet* pos = opt.kind == ExpandKind::label ? opt.positives : nullptr;
    if (opt.kind == ExpandKind::label && !pos) throw std::invalid_argument("label refinement needs a target label set");
    const std::size_t tp = pos ? intersection_count(ext, *pos) : 0;

    for (std::uint32_t a = 0; a < data.attribute_count(); ++a) {
        const auto& meta = data.attribute(a);
        const Restriction* current = parent.description.find(a);
        if (!meta.is_numerical()) {
            if (current) continue;
            if (opt.lectic && opt.last && a < opt.last->attribute) continue;
            for (ValueCode v = 0; v < meta.domain_size(); ++v) {
                if (opt.lectic && !lectic_allows(opt.last, a, ChangeKind::nominal)) break;
                Restriction r{a, v, v};
                if (base_len + (Description::is_effective(r, data) ? 1 : 0) > opt.limits.max_length) continue;
                std::size_t s = intersection_count(ext, data.value_set(a, v));
                if (opt.kind != ExpandKind::direct && s == support) continue;  // extent unchanged, branch exhausted
                if (s < opt.limits.min_support) continue;
                out.push_back({r, {a, ChangeKind::nominal, v}, s});
            }
            continue;
        }
        if (!current && base_len + 1 > opt.limits.max_length) continue;
        auto [lo, hi] = parent.description.interval(a, data);
        for (ChangeKind kind : {ChangeKind::left, ChangeKind::right}) {
            if (opt.lectic && !lectic_allows(opt.last, a, kind)) continue;
            detail::IntervalWalk w{data, ext, pos, a, kind == ChangeKind::left, lo, hi, support, tp};
            if (!w.can_step()) continue;
            if (opt.kind == ExpandKind::direct) {
                w.step(w.removed_at_boundary(), 0);
            } else {
                bool changed = false;
                while (w.can_step() && !changed) {
                    std::size_t removed = w.removed_at_boundary();
                    w.step(removed, w.removed_tp_at_boundary());
                    changed = removed > 0;
                }
                if (!changed) continue;
                if (opt.kind == ExpandKind::label) {
                    while (w.can_step() && w.removed_tp_at_boundary() == 0) {
                        std::size_t removed = w.removed_at_boundary();
                        if (w.support - removed < opt.limits.min_support) break;
                        w.step(removed, 0);
                    }
                }
            }
            if (w.support < opt.limits.min_support) continue;
            out.push_back({{a, w.lo, w.hi}, {a, kind, 0}, w.support});
        }
    }
    return out;
}

inline Subgroup apply(const Subgroup& parent, const Refinement& r, const Dataset& data) {
    Subgroup child{parent.description.with(r.restriction, data), parent.extent};
    child.extent &= restriction_extent(r.restriction, data);
    return child;
}

namespace detail {
inline std::vector<Description> descriptions_of(const Subgroup& s, const Dataset& data, const RefineOptions& opt) {
    std::vector<Description> out;
    for (const auto& r : refinements(s, data, opt)) out.push_back(s.description.with(r.restriction, data));
    return out;
}
}  // namespace detail

inline std::vector<Description> direct_refinements(const Description& s, const Dataset& data, std::size_t min_support,
                                                   std::size_t max_length = std::numeric_limits<std::size_t>::max()) {
    RefineOptions opt{ExpandKind::direct, {min_support, max_length}, nullptr, false, std::nullopt};
    return detail::descriptions_of(Subgroup::of(s, data), data, opt);
}

inline std::vector<Description> gen_refinements(const Description& s, const Dataset& data, std::size_t min_support,
                                                std::size_t max_length = std::numeric_limits<std::size_t>::max()) {
    RefineOptions opt{ExpandKind::gen, {min_support, max_length}, nullptr, false, std::nullopt};
    return detail::descriptions_of(Subgroup::of(s, data), data, opt);
}

inline std::vector<Description> label_refinements(const Description& s, const Dataset& data, std::size_t min_support,
                                                  ValueCode target,
                                                  std::size_t max_length = std::numeric_limits<std::size_t>::max()) {
    RefineOptions opt{ExpandKind::label, {min_support, max_length}, &data.label_set(target), false, std::nullopt};
    return detail::descriptions_of(Subgroup::of(s, data), data, opt);
}

/// Direct refinements of `s` restricted to lectic successors of `last`
/// (`std::nullopt` for the root).
inline std::vector<Description> lectic_children(const Description& s, const std::optional<Provenance>& last,
                                                const Dataset& data, RefineLimits limits = {}) {
    RefineOptions opt{ExpandKind::direct, limits, nullptr, true, last};
    return detail::descriptions_of(Subgroup::of(s, data), data, opt);
}

/// Depth-first lectic enumeration of the frequent lattice from the root.
/// The visitor receives each description exactly once along with the action
/// that produced it; returning false prunes that node's subtree.
inline void lectic_dfs(const Dataset& data, RefineLimits limits,
                       const std::function<bool(const Subgroup&, const std::optional<Provenance>&)>& visit) {
    Subgroup root{Description{}, data.all_objects()};
    if (root.support() < limits.min_support) return;
    struct Frame {
        Subgroup node;
        std::optional<Provenance> via;
    };
    std::vector<Frame> stack;
    stack.push_back({std::move(root), std::nullopt});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (!visit(f.node, f.via)) continue;
        RefineOptions opt{ExpandKind::direct, limits, nullptr, true, f.via};
        auto kids = refinements(f.node, data, opt);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({apply(f.node, *it, data), it->via});
    }
}

}  // namespace sdmcts
