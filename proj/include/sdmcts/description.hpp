#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dataset.hpp"
#include "object_set.hpp"

namespace sdmcts {

/// Restriction on one attribute. Nominal: `lo == hi` is the value code.
/// Numerical: closed interval of domain codes [lo, hi].
struct Restriction {
    std::uint32_t attribute = 0;
    ValueCode lo = 0;
    ValueCode hi = 0;

    friend auto operator<=>(const Restriction&, const Restriction&) = default;
    friend bool operator==(const Restriction&, const Restriction&) = default;
};

/// Conjunction of restrictions, at most one per attribute, sorted by
/// attribute. Unrestricted attributes (including full numerical intervals)
/// are absent, so equal descriptions have identical representations.
class Description {
  public:
    Description() = default;

    /// Canonicalizes `rs` against `data`: sorts, drops full intervals and
    /// rejects repeated attributes or out-of-domain codes.
    static Description make(std::vector<Restriction> rs, const Dataset& data) {
        std::sort(rs.begin(), rs.end());
        Description d;
        for (const auto& r : rs) {
            check(r, data);
            if (!d.rs_.empty() && d.rs_.back().attribute == r.attribute)
                throw std::invalid_argument("two restrictions on attribute " + data.attribute(r.attribute).name);
            if (!is_unrestricted(r, data)) d.rs_.push_back(r);
        }
        return d;
    }

    static bool is_unrestricted(const Restriction& r, const Dataset& data) {
        const auto& m = data.attribute(r.attribute);
        return m.is_numerical() && r.lo == 0 && r.hi + 1 == m.domain_size();
    }

    /// Copy with `r` replacing any existing restriction on its attribute.
    Description with(const Restriction& r, const Dataset& data) const {
        check(r, data);
        Description d = *this;
        auto it = std::lower_bound(d.rs_.begin(), d.rs_.end(), r.attribute,
                                   [](const Restriction& x, std::uint32_t a) { return x.attribute < a; });
        bool unrestricted = is_unrestricted(r, data);
        if (it != d.rs_.end() && it->attribute == r.attribute) {
            if (unrestricted) d.rs_.erase(it);
            else *it = r;
        } else if (!unrestricted) {
            d.rs_.insert(it, r);
        }
        return d;
    }

    Description without(std::uint32_t attribute) const {
        Description d = *this;
        std::erase_if(d.rs_, [&](const Restriction& r) { return r.attribute == attribute; });
        return d;
    }

    const std::vector<Restriction>& restrictions() const noexcept { return rs_; }
    std::size_t length() const noexcept { return rs_.size(); }
    bool empty() const noexcept { return rs_.empty(); }

    const Restriction* find(std::uint32_t attribute) const noexcept {
        for (const auto& r : rs_)
            if (r.attribute == attribute) return &r;
        return nullptr;
    }

    /// Current interval on a numerical attribute (full domain when unrestricted).
    std::pair<ValueCode, ValueCode> interval(std::uint32_t attribute, const Dataset& data) const {
        if (const auto* r = find(attribute)) return {r->lo, r->hi};
        return {0, static_cast<ValueCode>(data.attribute(attribute).domain_size() - 1)};
    }

    /// Number of restrictions that exclude at least one object of the dataset.
    std::size_t effective_length(const Dataset& data) const {
        std::size_t n = 0;
        for (const auto& r : rs_) n += is_effective(r, data) ? 1 : 0;
        return n;
    }

    static bool is_effective(const Restriction& r, const Dataset& data) {
        const auto& m = data.attribute(r.attribute);
        // Every domain value is observed, so only a singleton nominal domain
        // yields a restriction that excludes nothing.
        return m.is_numerical() || m.domain_size() > 1;
    }

    friend auto operator<=>(const Description&, const Description&) = default;
    friend bool operator==(const Description&, const Description&) = default;

  private:
    static void check(const Restriction& r, const Dataset& data) {
        if (r.attribute >= data.attribute_count())
            throw std::out_of_range("restriction references unknown attribute " + std::to_string(r.attribute));
        const auto& m = data.attribute(r.attribute);
        if (r.lo > r.hi || r.hi >= m.domain_size() || (!m.is_numerical() && r.lo != r.hi))
            throw std::out_of_range("invalid restriction payload on attribute " + m.name);
    }

    std::vector<Restriction> rs_;
};

/// Syntactic identity of a description, independent of how it was built.
struct DescriptionKey {
    std::vector<std::uint32_t> packed;

    friend auto operator<=>(const DescriptionKey&, const DescriptionKey&) = default;
    friend bool operator==(const DescriptionKey&, const DescriptionKey&) = default;
};

inline DescriptionKey canonical_key(const Description& d) {
    DescriptionKey k;
    k.packed.reserve(d.length() * 3);
    for (const auto& r : d.restrictions()) {
        k.packed.push_back(r.attribute);
        k.packed.push_back(r.lo);
        k.packed.push_back(r.hi);
    }
    return k;
}

inline ObjectSet restriction_extent(const Restriction& r, const Dataset& data) {
    if (r.attribute >= data.attribute_count())
        throw std::out_of_range("restriction references unknown attribute " + std::to_string(r.attribute));
    if (!data.attribute(r.attribute).is_numerical()) return data.value_set(r.attribute, r.lo);
    ObjectSet out(data.object_count());
    auto col = data.column(r.attribute);
    for (std::size_t o = 0; o < col.size(); ++o)
        if (col[o] >= r.lo && col[o] <= r.hi) out.insert(o);
    return out;
}

/// Objects satisfying every restriction; the empty description covers all objects.
inline ObjectSet extent(const Description& d, const Dataset& data) {
    ObjectSet out = data.all_objects();
    for (const auto& r : d.restrictions()) out &= restriction_extent(r, data);
    return out;
}

/// True iff every restriction of `s2` is implied by one of `s1` and s1 != s2.
inline bool is_more_specific(const Description& s1, const Description& s2) {
    if (s1 == s2) return false;
    for (const auto& r2 : s2.restrictions()) {
        const auto* r1 = s1.find(r2.attribute);
        if (!r1 || r1->lo < r2.lo || r1->hi > r2.hi) return false;
    }
    return true;
}

struct Subgroup {
    Description description;
    ObjectSet extent;

    std::size_t support() const noexcept { return extent.count(); }

    static Subgroup of(Description d, const Dataset& data) {
        auto e = sdmcts::extent(d, data);
        return {std::move(d), std::move(e)};
    }
};

inline std::string to_string(const Restriction& r, const Dataset& data) {
    const auto& m = data.attribute(r.attribute);
    if (!m.is_numerical()) return m.name + " = " + m.value_text(r.lo);
    return m.value_text(r.lo) + " <= " + m.name + " <= " + m.value_text(r.hi);
}

/// `attr = v` / `l <= attr <= r` joined by " AND "; the empty description is "".
inline std::string to_string(const Description& d, const Dataset& data) {
    std::string out;
    for (const auto& r : d.restrictions()) {
        if (!out.empty()) out += " AND ";
        out += to_string(r, data);
    }
    return out;
}

inline Description parse_description(std::string_view text, const Dataset& data) {
    std::vector<Restriction> rs;
    auto fail = [&](std::string_view part) {
        throw std::invalid_argument("cannot parse restriction '" + std::string(part) + "'");
    };
    while (!text.empty()) {
        auto cut = text.find(" AND ");
        std::string_view part = text.substr(0, cut);
        text = cut == std::string_view::npos ? std::string_view{} : text.substr(cut + 5);
        if (auto le = part.find(" <= "); le != std::string_view::npos) {
            auto le2 = part.find(" <= ", le + 4);
            if (le2 == std::string_view::npos) fail(part);
            std::string name(part.substr(le + 4, le2 - le - 4));
            auto a = data.attribute_index(name);
            if (!a || !data.attribute(*a).is_numerical()) fail(part);
            const auto& m = data.attribute(*a);
            auto lo = m.find_numeric(parse_decimal(std::string(part.substr(0, le)), name, 0));
            auto hi = m.find_numeric(parse_decimal(std::string(part.substr(le2 + 4)), name, 0));
            if (!lo || !hi) fail(part);
            rs.push_back({static_cast<std::uint32_t>(*a), *lo, *hi});
        } else if (auto eq = part.find(" = "); eq != std::string_view::npos) {
            std::string name(part.substr(0, eq));
            auto a = data.attribute_index(name);
            if (!a || data.attribute(*a).is_numerical()) fail(part);
            auto v = data.attribute(*a).find_nominal(std::string(part.substr(eq + 3)));
            if (!v) fail(part);
            rs.push_back({static_cast<std::uint32_t>(*a), *v, *v});
        } else {
            fail(part);
        }
    }
    return Description::make(std::move(rs), data);
}

}  // namespace sdmcts

template <>
struct std::hash<sdmcts::DescriptionKey> {
    std::size_t operator()(const sdmcts::DescriptionKey& k) const noexcept {
        std::size_t h = k.packed.size();
        for (auto v : k.packed) h ^= std::hash<std::uint32_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};
