#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "dataset.hpp"
#include "description.hpp"
#include "refinement.hpp"

namespace sdmcts {

/// Non-negative reduced fraction.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational make(unsigned __int128 n, unsigned __int128 d) {
        if (d == 0) throw std::domain_error("zero denominator");
        unsigned __int128 a = n, b = d;
        while (b) {
            auto t = a % b;
            a = b;
            b = t;
        }
        n /= a;
        d /= a;
        if (n > UINT64_MAX || d > UINT64_MAX) throw std::overflow_error("rational does not fit in 64 bits");
        return {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d)};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

namespace detail {

// Number of descriptions below `s` obtained by only tightening attribute `a`:
// an unrestricted nominal attribute can stay free or take one of its values.
inline unsigned __int128 total_factor(const Description& s, std::uint32_t a, const Dataset& data) {
    const auto& m = data.attribute(a);
    if (!m.is_numerical()) return s.find(a) ? 1 : m.domain_size() + 1;
    auto [lo, hi] = s.interval(a, data);
    unsigned __int128 n = hi - lo + 1;
    return n * (n + 1) / 2;
}

inline unsigned __int128 checked_mul(unsigned __int128 x, unsigned __int128 y) {
    if (y && x > static_cast<unsigned __int128>(-1) / y) throw std::overflow_error("exploration rate overflow");
    return x * y;
}

}  // namespace detail

/// Ratio between the size of the sub-lattice below `s` and the size of the
/// part of it that a lectic enumeration reaches from `s` when `s` was
/// produced by action `via` (std::nullopt for the root, whose ratio is 1).
/// Attributes ranked after `via` contribute equally to both sizes and cancel.
inline Rational rho_norm(const Description& s, const std::optional<Provenance>& via, const Dataset& data) {
    if (!via) return {1, 1};
    const std::uint32_t last = via->attribute;
    if (last >= data.attribute_count()) throw std::invalid_argument("provenance references unknown attribute");
    const auto& m = data.attribute(last);
    if (m.is_numerical() == (via->kind == ChangeKind::nominal))
        throw std::invalid_argument("provenance kind does not match attribute " + m.name);
    if (!m.is_numerical() && !s.find(last))
        throw std::invalid_argument("provenance attribute " + m.name + " is not restricted");

    unsigned __int128 total = 1, lectic = 1;
    for (std::uint32_t a = 0; a < last; ++a) total = detail::checked_mul(total, detail::total_factor(s, a, data));
    total = detail::checked_mul(total, detail::total_factor(s, last, data));
    if (via->kind == ChangeKind::left) {
        lectic = detail::total_factor(s, last, data);
    } else if (via->kind == ChangeKind::right) {
        auto [lo, hi] = s.interval(last, data);
        lectic = hi - lo + 1;
    }
    return Rational::make(total, lectic);
}

/// Floating-point variant for search scoring; it never overflows.
inline double rho_norm_value(const Description& s, const std::optional<Provenance>& via, const Dataset& data) {
    if (!via) return 1.0;
    double r = 1.0;
    for (std::uint32_t a = 0; a < via->attribute; ++a)
        r *= static_cast<double>(detail::total_factor(s, a, data));
    if (via->kind == ChangeKind::right) {
        auto [lo, hi] = s.interval(via->attribute, data);
        r *= (static_cast<double>(hi - lo) + 2.0) / 2.0;
    }
    return r;
}

/// Itemset closed form: 2^(|I|-|s|) / 2^(|I|-i-1), i the 0-based rank of the
/// last item added.
inline Rational rho_itemset_closed(unsigned n_items, unsigned s_size, unsigned last_rank) {
    if (s_size > n_items || last_rank >= n_items) throw std::invalid_argument("inconsistent itemset shape");
    return Rational::make(static_cast<unsigned __int128>(1) << (n_items - s_size),
                          static_cast<unsigned __int128>(1) << (n_items - last_rank - 1));
}

/// Single numerical attribute closed form: 1 after a left change, (n+1)/2
/// after a right change, n the number of domain values in the interval.
inline Rational rho_interval_closed(ChangeKind kind, std::uint64_t n) {
    if (kind == ChangeKind::left) return {1, 1};
    if (kind == ChangeKind::right) return Rational::make(n + 1, 2);
    throw std::invalid_argument("interval closed form needs a left or right change");
}

}  // namespace sdmcts
