#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "dataset.hpp"
#include "description.hpp"
#include "error.hpp"
#include "object_set.hpp"

namespace sdmcts {

enum class MeasureKind { wracc, f1, accuracy, jaccard, entropy_gain };

inline const char* to_string(MeasureKind k) {
    switch (k) {
        case MeasureKind::wracc: return "wracc";
        case MeasureKind::f1: return "f1";
        case MeasureKind::accuracy: return "acc";
        case MeasureKind::jaccard: return "jaccard";
        case MeasureKind::entropy_gain: return "entropy";
    }
    return "?";
}

inline MeasureKind parse_measure(const std::string& s) {
    if (s == "wracc") return MeasureKind::wracc;
    if (s == "f1") return MeasureKind::f1;
    if (s == "acc" || s == "accuracy") return MeasureKind::accuracy;
    if (s == "jaccard") return MeasureKind::jaccard;
    if (s == "entropy") return MeasureKind::entropy_gain;
    throw ConfigError("unknown measure '" + s + "'");
}

struct MeasureSpec {
    MeasureKind kind = MeasureKind::wracc;
    ValueCode target = 0;
};

/// Confusion counts of a subgroup against one target label.
struct Counts {
    double tp;     // covered objects with the target label
    double supp;   // covered objects
    double pos;    // objects with the target label
    double total;  // all objects
};

namespace detail {
inline double plogp(double p) { return p > 0 ? -p * std::log2(p) : 0.0; }
inline double binary_entropy(double k, double n) { return n > 0 ? plogp(k / n) + plogp((n - k) / n) : 0.0; }
}  // namespace detail

inline double evaluate(MeasureKind kind, const Counts& c) {
    if (c.supp <= 0 && kind != MeasureKind::wracc && kind != MeasureKind::jaccard)
        throw std::domain_error(std::string("empty extent for measure ") + to_string(kind));
    switch (kind) {
        case MeasureKind::wracc:
            // supp/|O| * (tp/supp - pos/|O|), kept in one division
            return (c.tp * c.total - c.supp * c.pos) / (c.total * c.total);
        case MeasureKind::f1: return 2 * c.tp / (c.supp + c.pos);
        case MeasureKind::accuracy: return c.tp / c.supp;
        case MeasureKind::jaccard: {
            double uni = c.supp + c.pos - c.tp;
            if (uni <= 0) throw std::domain_error("jaccard of two empty sets");
            return c.tp / uni;
        }
        case MeasureKind::entropy_gain: {
            // Target-vs-rest class variable, split on in/out of the subgroup.
            double h = detail::binary_entropy(c.pos, c.total);
            if (h <= 0) return 0.0;
            double out = c.total - c.supp;
            double cond = c.supp / c.total * detail::binary_entropy(c.tp, c.supp) +
                          (out > 0 ? out / c.total * detail::binary_entropy(c.pos - c.tp, out) : 0.0);
            double g = (h - cond) / h;
            return g < 0 ? 0.0 : (g > 1 ? 1.0 : g);
        }
    }
    return 0;
}

inline Counts counts_of(const ObjectSet& extent, ValueCode target, const Dataset& data) {
    const auto& pos = data.label_set(target);
    return {static_cast<double>(intersection_count(extent, pos)), static_cast<double>(extent.count()),
            static_cast<double>(pos.count()), static_cast<double>(data.object_count())};
}

inline double evaluate(const MeasureSpec& m, const ObjectSet& extent, const Dataset& data) {
    if (m.target >= data.label_count()) throw std::out_of_range("target label out of range");
    return evaluate(m.kind, counts_of(extent, m.target, data));
}

inline double evaluate(const MeasureSpec& m, const Subgroup& sg, const Dataset& data) {
    return evaluate(m, sg.extent, data);
}

/// Affine map of the measure's range onto [0, 1].
inline double normalize(MeasureKind kind, double v) {
    constexpr double slack = 1e-12;
    double lo = kind == MeasureKind::wracc ? -0.25 : 0.0;
    double hi = kind == MeasureKind::wracc ? 0.25 : 1.0;
    if (!(v >= lo - slack && v <= hi + slack))
        throw std::domain_error(std::string("value out of range for ") + to_string(kind) + ": " + format_number(v));
    double n = kind == MeasureKind::wracc ? 2 * v + 0.5 : v;
    return n < 0 ? 0.0 : (n > 1 ? 1.0 : n);
}

inline double normalize(const MeasureSpec& m, double v) { return normalize(m.kind, v); }

}  // namespace sdmcts
