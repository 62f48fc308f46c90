#pragma once

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csv.hpp"
#include "dataset.hpp"
#include "description.hpp"
#include "generator.hpp"
#include "object_set.hpp"
#include "pattern_pool.hpp"

namespace sdmcts {

inline double jaccard_sim(const ObjectSet& a, const ObjectSet& b) {
    std::size_t uni = union_count(a, b);
    if (uni == 0) throw std::domain_error("jaccard similarity of two empty sets");
    return static_cast<double>(intersection_count(a, b)) / static_cast<double>(uni);
}

struct ResultEntry {
    Description description;
    ObjectSet extent;
    double phi = 0;
    std::uint8_t sources = 0;

    std::size_t support() const { return extent.count(); }
};

struct ResultSet {
    std::vector<ResultEntry> entries;
    double theta = 0.5;
    std::size_t max_output = 50;
};

/// Quality descending, then shorter descriptions, then description order.
inline bool ranks_before(const ResultEntry& x, const ResultEntry& y) {
    if (x.phi != y.phi) return x.phi > y.phi;
    if (x.description.length() != y.description.length()) return x.description.length() < y.description.length();
    return x.description < y.description;
}

/// Greedy redundancy filter: walks the ranked list and keeps an entry iff
/// its Jaccard similarity to every kept entry is below theta.
inline std::vector<ResultEntry> greedy_filter(std::vector<ResultEntry> ranked, double theta,
                                              std::size_t max_output = static_cast<std::size_t>(-1)) {
    if (!(theta > 0 && theta <= 1)) throw std::invalid_argument("theta must lie in (0, 1]");
    std::stable_sort(ranked.begin(), ranked.end(), ranks_before);
    std::vector<ResultEntry> kept;
    for (auto& e : ranked) {
        if (kept.size() >= max_output) break;
        bool redundant = std::any_of(kept.begin(), kept.end(),
                                     [&](const ResultEntry& k) { return jaccard_sim(k.extent, e.extent) >= theta; });
        if (!redundant) kept.push_back(std::move(e));
    }
    return kept;
}

inline std::vector<ResultEntry> to_entries(const PatternPool& pool) {
    std::vector<ResultEntry> out;
    out.reserve(pool.size());
    for (const auto& e : pool.entries()) out.push_back({e.subgroup.description, e.subgroup.extent, e.phi, e.sources});
    return out;
}

inline ResultSet filter(const PatternPool& pool, double theta, std::size_t max_output) {
    if (max_output < 1) throw std::invalid_argument("max_output must be >= 1");
    return {greedy_filter(to_entries(pool), theta, max_output), theta, max_output};
}

inline ResultSet filter(const ResultSet& rs, double theta, std::size_t max_output) {
    if (max_output < 1) throw std::invalid_argument("max_output must be >= 1");
    return {greedy_filter(rs.entries, theta, max_output), theta, max_output};
}

/// 1 - |filter(R)| / |R| with an uncapped filter.
inline double redundancy(const std::vector<ResultEntry>& r, double theta) {
    if (r.empty()) throw std::invalid_argument("redundancy of an empty set");
    return 1.0 - static_cast<double>(greedy_filter(r, theta).size()) / static_cast<double>(r.size());
}

/// Summed quality of filter(R).
inline double diversity(const std::vector<ResultEntry>& r, double theta) {
    double s = 0;
    for (const auto& e : greedy_filter(r, theta)) s += e.phi;
    return s;
}

/// Mean over hidden patterns of the best Jaccard similarity with a found
/// pattern; 0 when nothing was found.
inline double recovery_qual(const GroundTruth& truth, const std::vector<ResultEntry>& found, const Dataset& data) {
    if (truth.hidden.empty()) throw std::invalid_argument("ground truth is empty");
    if (found.empty()) return 0.0;
    double sum = 0;
    for (const auto& h : truth.hidden) {
        auto eh = extent(h, data);
        double best = 0;
        for (const auto& f : found) {
            if (eh.empty() && f.extent.empty()) continue;
            best = std::max(best, jaccard_sim(eh, f.extent));
        }
        sum += best;
    }
    return sum / static_cast<double>(truth.hidden.size());
}

inline double recovery_qual(const GroundTruth& truth, const ResultSet& found, const Dataset& data) {
    return recovery_qual(truth, found.entries, data);
}

inline void write_result_csv(std::ostream& out, const ResultSet& rs, const Dataset& data) {
    csv::write_row(out, {"rank", "description", "support", "quality"});
    for (std::size_t i = 0; i < rs.entries.size(); ++i) {
        const auto& e = rs.entries[i];
        csv::write_row(out, {std::to_string(i + 1), to_string(e.description, data), std::to_string(e.support()),
                             format_number(e.phi)});
    }
}

inline void write_result_text(std::ostream& out, const ResultSet& rs, const Dataset& data) {
    for (std::size_t i = 0; i < rs.entries.size(); ++i) {
        const auto& e = rs.entries[i];
        std::string d = to_string(e.description, data);
        out << "#" << (i + 1) << "  q=" << format_number(e.phi) << "  supp=" << e.support() << "  "
            << (d.empty() ? "(all objects)" : d);
        if (e.sources) {
            out << "  [";
            if (e.sources & from_tree) out << "tree";
            if ((e.sources & from_tree) && (e.sources & from_memory)) out << ",";
            if (e.sources & from_memory) out << "memory";
            out << "]";
        }
        out << '\n';
    }
}

}  // namespace sdmcts
