#pragma once

#include <sdmcts/sdmcts.hpp>

#include <sstream>
#include <string>

namespace fixtures {

inline const char* toy_csv =
    "id,a,b,c,class\n"
    "1,150,21,11,l1\n"
    "2,128,29,9,l2\n"
    "3,136,24,10,l2\n"
    "4,152,23,11,l3\n"
    "5,151,27,12,l2\n"
    "6,142,27,10,l1\n";

inline sdmcts::Schema toy_schema() {
    std::istringstream s("a=numerical\nb=numerical\nc=numerical\nclass=label\n");
    return sdmcts::Schema::parse(s);
}

inline const sdmcts::Dataset& toy() {
    static const sdmcts::Dataset d = [] {
        std::istringstream in(toy_csv);
        return sdmcts::load_csv(in, toy_schema(), "toy");
    }();
    return d;
}

inline sdmcts::Description desc(const std::string& text, const sdmcts::Dataset& d = toy()) {
    return sdmcts::parse_description(text, d);
}

/// Objects as the 1-based ids used in the toy table.
inline std::vector<std::size_t> ids(const sdmcts::ObjectSet& s) {
    auto v = s.indices();
    for (auto& i : v) ++i;
    return v;
}

/// Nominal dataset with `n_attr` attributes whose values come from `rows`.
inline sdmcts::Dataset nominal(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& labels) {
    std::vector<sdmcts::RawColumn> cols(rows.front().size());
    for (std::size_t a = 0; a < cols.size(); ++a) {
        cols[a].name = std::string(1, static_cast<char>('a' + a));
        cols[a].kind = sdmcts::AttributeKind::nominal;
        for (const auto& r : rows) cols[a].text.push_back(r[a]);
    }
    return sdmcts::Dataset::from_columns("nominal", std::move(cols), labels);
}

/// Itemset-like data over items a, b, c, ...: every attribute has the single
/// value "1", so the description lattice is the powerset of the items.
inline sdmcts::Dataset itemsets(std::size_t n_items, std::size_t n_objects = 2) {
    std::vector<std::vector<std::string>> rows(n_objects, std::vector<std::string>(n_items, "1"));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n_objects; ++i) labels.push_back(i % 2 ? "y" : "x");
    return nominal(rows, labels);
}

/// Random dataset mixing nominal and numerical attributes.
inline sdmcts::Dataset random_mixed(std::uint64_t seed, std::size_t max_attr = 4, std::size_t max_values = 6,
                                    std::size_t n_objects = 12) {
    sdmcts::Rng rng(seed);
    std::size_t n_attr = 1 + sdmcts::uniform_index(rng, max_attr);
    std::vector<sdmcts::RawColumn> cols(n_attr);
    for (std::size_t a = 0; a < n_attr; ++a) {
        cols[a].name = "x" + std::to_string(a);
        cols[a].kind = sdmcts::coin(rng) ? sdmcts::AttributeKind::numerical : sdmcts::AttributeKind::nominal;
        std::size_t dom = 1 + sdmcts::uniform_index(rng, max_values);
        for (std::size_t o = 0; o < n_objects; ++o) {
            std::size_t v = sdmcts::uniform_index(rng, dom);
            if (cols[a].kind == sdmcts::AttributeKind::numerical) cols[a].numbers.push_back(static_cast<double>(v));
            else cols[a].text.push_back("v" + std::to_string(v));
        }
    }
    std::vector<std::string> labels;
    for (std::size_t o = 0; o < n_objects; ++o) labels.push_back(sdmcts::coin(rng) ? "pos" : "neg");
    return sdmcts::Dataset::from_columns("random", std::move(cols), labels);
}

}  // namespace fixtures
