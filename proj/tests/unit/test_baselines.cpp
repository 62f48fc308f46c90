#include <gtest/gtest.h>

#include <deque>
#include <set>

#include "fixtures.hpp"

using namespace sdmcts;
using fixtures::toy;

namespace {

MeasureSpec l2() { return {MeasureKind::wracc, *toy().label_index("l2")}; }

std::set<DescriptionKey> keys(const PatternPool& pool) {
    std::set<DescriptionKey> out;
    for (const auto& e : pool.entries()) out.insert(canonical_key(e.subgroup.description));
    return out;
}

}  // namespace

TEST(Exhaustive, FullSupportOnlyKeepsRoot) {
    auto pool = exhaustive_dfs(toy(), 6, 5, l2());
    ASSERT_EQ(pool.size(), 1u);
    EXPECT_TRUE(pool.entries()[0].subgroup.description.empty());
    // no single border step on the toy table keeps all six objects
    for (const auto& d : direct_refinements(Description{}, toy(), 1)) EXPECT_LT(extent(d, toy()).count(), 6u);
}

TEST(Exhaustive, InfeasibleSupportAndNodeCap) {
    EXPECT_THROW(exhaustive_dfs(toy(), 7, 5, l2()), ConfigError);
    EXPECT_THROW(exhaustive_dfs(toy(), 1, 5, l2(), 10), NodeCapExceeded);
}

TEST(Exhaustive, MatchesBreadthFirstCount) {
    for (std::size_t ms : {1, 2, 3}) {
        std::set<DescriptionKey> seen{canonical_key(Description{})};
        std::deque<Description> queue{Description{}};
        while (!queue.empty()) {
            auto d = queue.front();
            queue.pop_front();
            for (auto& c : direct_refinements(d, toy(), ms))
                if (seen.insert(canonical_key(c)).second) queue.push_back(std::move(c));
        }
        EXPECT_EQ(keys(exhaustive_dfs(toy(), ms, 99, l2())), seen);
    }
}

TEST(Beam, WidthOneIsGreedyChain) {
    BeamConfig cfg;
    cfg.width = 1;
    cfg.min_support = 1;
    cfg.max_length = 3;
    cfg.depth = 8;
    cfg.measure = l2();
    auto pool = beam_search(toy(), cfg);

    std::set<DescriptionKey> expect;
    Description cur;
    for (std::size_t level = 0; level < cfg.depth; ++level) {
        std::vector<ResultEntry> kids;
        for (auto& d : direct_refinements(cur, toy(), 1, 3)) {
            auto e = extent(d, toy());
            double phi = evaluate(l2(), e, toy());
            expect.insert(canonical_key(d));
            kids.push_back({std::move(d), std::move(e), phi, 0});
        }
        if (kids.empty()) break;
        cur = std::min_element(kids.begin(), kids.end(), ranks_before)->description;
    }
    EXPECT_EQ(keys(pool), expect);
}

TEST(Beam, WideBeamEqualsExhaustiveOnNominalData) {
    auto data = fixtures::nominal({{"x", "u", "k"}, {"y", "u", "k"}, {"x", "w", "m"}, {"y", "w", "k"}}, {"p", "q", "p", "q"});
    BeamConfig cfg;
    cfg.width = 1000;
    cfg.min_support = 1;
    cfg.max_length = 3;
    cfg.measure = {MeasureKind::wracc, 0};
    auto beam = keys(beam_search(data, cfg));
    auto all = keys(exhaustive_dfs(data, 1, 3, cfg.measure));
    beam.insert(canonical_key(Description{}));
    EXPECT_EQ(beam, all);
}

TEST(Beam, StopsWhenNothingIsFrequent) {
    BeamConfig cfg;
    cfg.min_support = 6;
    cfg.measure = l2();
    EXPECT_EQ(beam_search(toy(), cfg).size(), 0u);
    cfg.width = 0;
    EXPECT_THROW(beam_search(toy(), cfg), ConfigError);
}

TEST(Beam, SubsetOfExhaustiveAndRespectsLimits) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto data = fixtures::random_mixed(seed, 4, 6, 16);
        BeamConfig cfg;
        cfg.width = 3;
        cfg.min_support = 2;
        cfg.max_length = 2;
        cfg.depth = 4;
        cfg.measure = {MeasureKind::wracc, 0};
        auto beam = beam_search(data, cfg);
        auto all = exhaustive_dfs(data, 2, 2, cfg.measure);
        auto k = keys(all);
        for (const auto& e : beam.entries()) {
            EXPECT_TRUE(k.count(canonical_key(e.subgroup.description)));
            EXPECT_GE(e.subgroup.support(), 2u);
            EXPECT_LE(e.subgroup.description.effective_length(data), 2u);
            EXPECT_LE(e.phi, all.best_phi());
        }
    }
}

TEST(Sampler, SingleDrawOneAttribute) {
    std::vector<RawColumn> cols(1);
    cols[0].name = "x";
    cols[0].kind = AttributeKind::numerical;
    cols[0].numbers = {1, 2, 3, 4};
    auto data = Dataset::from_columns("line", cols, {"p", "q", "p", "q"});
    auto pool = uniform_sampler(data, 1, 1, {MeasureKind::wracc, 0}, 9);
    ASSERT_EQ(pool.size(), 1u);
    EXPECT_GE(pool.entries()[0].subgroup.support(), 1u);
    EXPECT_THROW(uniform_sampler(data, 0, 1, {MeasureKind::wracc, 0}, 9), ConfigError);
}

TEST(Sampler, DeterministicPerSeed) {
    auto a = uniform_sampler(toy(), 500, 1, l2(), 4), b = uniform_sampler(toy(), 500, 1, l2(), 4);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_EQ(a.entries()[i].subgroup.description, b.entries()[i].subgroup.description);
    auto c = uniform_sampler(toy(), 500, 1, l2(), 5);
    bool same = c.size() == a.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
        same = a.entries()[i].subgroup.description == c.entries()[i].subgroup.description;
    EXPECT_FALSE(same);
}

TEST(Sampler, CoversEveryPointRestriction) {
    auto pool = uniform_sampler(toy(), 10000, 1, l2(), 1);
    for (std::uint32_t a = 0; a < toy().attribute_count(); ++a)
        for (ValueCode v = 0; v < toy().attribute(a).domain_size(); ++v)
            EXPECT_TRUE(pool.contains(Description::make({{a, v, v}}, toy())))
                << toy().attribute(a).name << " value " << v;
}

TEST(Sampler, RespectsLimits) {
    auto pool = uniform_sampler(toy(), 2000, 2, l2(), 3, 1);
    for (const auto& e : pool.entries()) {
        EXPECT_GE(e.subgroup.support(), 2u);
        EXPECT_LE(e.subgroup.description.effective_length(toy()), 1u);
        EXPECT_EQ(e.subgroup.extent, extent(e.subgroup.description, toy()));
    }
}
