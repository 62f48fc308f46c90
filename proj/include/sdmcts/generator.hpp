#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dataset.hpp"
#include "description.hpp"
#include "error.hpp"
#include "random.hpp"

namespace sdmcts {

struct GeneratorParams {
    std::size_t nb_obj = 2000;
    std::size_t nb_attr = 5;
    std::size_t domain_size = 10;
    std::size_t nb_patterns = 3;
    std::size_t pattern_sup = 100;
    double out_factor = 0.1;
    double noise_rate = 0.1;
    std::uint64_t seed = 0;

    void validate() const {
        if (nb_obj < 1 || nb_attr < 1 || domain_size < 1 || nb_patterns < 1 || pattern_sup < 1)
            throw ConfigError("generator counts must all be >= 1");
        if (!(out_factor >= 0 && out_factor <= 1) || !(noise_rate >= 0 && noise_rate <= 1))
            throw ConfigError("out_factor and noise_rate must lie in [0, 1]");
        if (static_cast<double>(nb_patterns * pattern_sup) * (1 + out_factor) > static_cast<double>(nb_obj))
            throw ConfigError("nb_patterns * pattern_sup * (1 + out_factor) exceeds nb_obj");
    }

    std::string name() const {
        return std::to_string(nb_obj) + "_" + std::to_string(nb_attr) + "_" + std::to_string(domain_size);
    }
};

/// Parses a generator spec:
///  - a named preset: `P_small`, `P_medium`, `P_large`;
///  - `nb_obj_nb_attr_domain_size` (the remaining parameters take the
///    5 / 200 / 0.05 / 0.05 values used with that naming scheme);
///  - seven comma-separated values in field order.
inline GeneratorParams parse_generator_spec(const std::string& spec) {
    GeneratorParams p;
    if (spec == "P_small") return p;
    if (spec == "P_medium") {
        p.nb_obj = 20000, p.domain_size = 20, p.nb_patterns = 5;
        return p;
    }
    if (spec == "P_large") {
        p.nb_obj = 50000, p.nb_attr = 25, p.domain_size = 50, p.nb_patterns = 25;
        return p;
    }
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, sep)) out.push_back(item);
        return out;
    };
    auto count = [&](const std::string& t) -> std::size_t {
        std::size_t v = 0;
        auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
            throw ConfigError("bad generator count '" + t + "' in '" + spec + "'");
        return v;
    };
    auto prob = [&](const std::string& t) {
        try {
            return parse_decimal(t, "generator", 0);
        } catch (const LoadError&) {
            throw ConfigError("bad generator rate '" + t + "' in '" + spec + "'");
        }
    };
    if (auto parts = split(spec, '_'); parts.size() == 3) {
        p.nb_obj = count(parts[0]), p.nb_attr = count(parts[1]), p.domain_size = count(parts[2]);
        p.nb_patterns = 5, p.pattern_sup = 200, p.out_factor = 0.05, p.noise_rate = 0.05;
        return p;
    }
    auto parts = split(spec, ',');
    if (parts.size() != 7) throw ConfigError("generator spec needs 7 comma-separated values: '" + spec + "'");
    p.nb_obj = count(parts[0]), p.nb_attr = count(parts[1]), p.domain_size = count(parts[2]);
    p.nb_patterns = count(parts[3]), p.pattern_sup = count(parts[4]);
    p.out_factor = prob(parts[5]), p.noise_rate = prob(parts[6]);
    return p;
}

struct GroundTruth {
    std::vector<Description> hidden;
};

struct GeneratedData {
    Dataset data;
    GroundTruth truth;
    /// Object index ranges [begin, end) of each pattern's planted block
    /// (positives followed by planted negatives).
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
};

inline const std::string& positive_label() {
    static const std::string s = "+";
    return s;
}
inline const std::string& negative_label() {
    static const std::string s = "-";
    return s;
}

/// Nominal dataset with `nb_patterns` planted descriptions. Per pattern:
/// `pattern_sup` positives (each noisy with probability noise_rate, in which
/// case the pattern's attributes are redrawn uniformly) then
/// floor(pattern_sup * out_factor) negatives covered by the pattern. The
/// remaining objects are uniform random negatives.
inline GeneratedData generate_artificial(const GeneratorParams& params) {
    params.validate();
    Rng rng(derive_seed(params.seed, seed_stream::data));
    const std::size_t n_attr = params.nb_attr, dom = params.domain_size;

    struct Planted {
        std::vector<std::size_t> attrs;
        std::vector<std::size_t> values;
    };
    std::vector<Planted> planted(params.nb_patterns);
    for (auto& pat : planted) {
        std::size_t len = 1 + uniform_index(rng, n_attr);
        std::vector<std::size_t> order(n_attr);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = 0; i < len; ++i) std::swap(order[i], order[i + uniform_index(rng, n_attr - i)]);
        pat.attrs.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(len));
        std::sort(pat.attrs.begin(), pat.attrs.end());
        for (std::size_t i = 0; i < len; ++i) pat.values.push_back(uniform_index(rng, dom));
    }

    std::vector<std::vector<std::size_t>> rows;
    std::vector<std::string> labels;
    rows.reserve(params.nb_obj);
    auto random_row = [&] {
        std::vector<std::size_t> row(n_attr);
        for (auto& v : row) v = uniform_index(rng, dom);
        return row;
    };
    auto stamp = [](std::vector<std::size_t>& row, const Planted& pat) {
        for (std::size_t i = 0; i < pat.attrs.size(); ++i) row[pat.attrs[i]] = pat.values[i];
    };
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    const auto n_out = static_cast<std::size_t>(std::floor(static_cast<double>(params.pattern_sup) * params.out_factor));
    for (const auto& pat : planted) {
        std::size_t begin = rows.size();
        for (std::size_t k = 0; k < params.pattern_sup; ++k) {
            auto row = random_row();
            stamp(row, pat);
            if (coin(rng, params.noise_rate))
                for (auto a : pat.attrs) row[a] = uniform_index(rng, dom);
            rows.push_back(std::move(row));
            labels.push_back(positive_label());
        }
        for (std::size_t k = 0; k < n_out; ++k) {
            auto row = random_row();
            stamp(row, pat);
            rows.push_back(std::move(row));
            labels.push_back(negative_label());
        }
        blocks.emplace_back(begin, rows.size());
    }
    while (rows.size() < params.nb_obj) {
        rows.push_back(random_row());
        labels.push_back(negative_label());
    }

    auto value_name = [&](std::size_t v) {
        std::string s = std::to_string(v);
        std::string width = std::to_string(dom - 1);
        return "v" + std::string(width.size() - std::min(width.size(), s.size()), '0') + s;
    };
    std::vector<RawColumn> columns(n_attr);
    for (std::size_t a = 0; a < n_attr; ++a) {
        columns[a].name = "a" + std::to_string(a);
        columns[a].kind = AttributeKind::nominal;
        columns[a].text.reserve(rows.size());
        for (const auto& row : rows) columns[a].text.push_back(value_name(row[a]));
    }
    Dataset data = Dataset::from_columns(params.name(), std::move(columns), labels);

    GroundTruth truth;
    for (const auto& pat : planted) {
        std::vector<Restriction> rs;
        for (std::size_t i = 0; i < pat.attrs.size(); ++i) {
            auto code = data.attribute(pat.attrs[i]).find_nominal(value_name(pat.values[i]));
            if (!code) throw Error("planted value never occurs in the generated data; use another seed");
            rs.push_back({static_cast<std::uint32_t>(pat.attrs[i]), *code, *code});
        }
        truth.hidden.push_back(Description::make(std::move(rs), data));
    }
    return {std::move(data), std::move(truth), std::move(blocks)};
}

}  // namespace sdmcts
