#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"

using namespace sdmcts;
using fixtures::desc;
using fixtures::toy;

namespace {

ObjectSet set_of(std::vector<std::size_t> ids, std::size_t universe = 10) {
    for (auto& i : ids) --i;
    return ObjectSet::from_indices(universe, ids);
}

ResultEntry entry(double phi, std::vector<std::size_t> ids) { return {Description{}, set_of(std::move(ids)), phi, 0}; }

// A {1,2,3} .3, B {1,2,4} .25, C {7,8} .2
std::vector<ResultEntry> abc() { return {entry(0.25, {1, 2, 4}), entry(0.2, {7, 8}), entry(0.3, {1, 2, 3})}; }

ResultEntry from_desc(const char* text, double phi = 0) {
    auto s = Subgroup::of(desc(text), toy());
    return {s.description, s.extent, phi, 0};
}

}  // namespace

TEST(JaccardSim, Examples) {
    EXPECT_DOUBLE_EQ(jaccard_sim(set_of({1, 2}), set_of({1, 2})), 1.0);
    EXPECT_DOUBLE_EQ(jaccard_sim(set_of({1, 2}), set_of({3})), 0.0);
    EXPECT_DOUBLE_EQ(jaccard_sim(set_of({2, 3, 5, 6}), set_of({1, 2, 3, 5, 6})), 0.8);
    EXPECT_THROW(jaccard_sim(set_of({}), set_of({})), std::domain_error);
}

TEST(Filter, GreedyTrace) {
    auto kept = greedy_filter(abc(), 0.5, 50);
    ASSERT_EQ(kept.size(), 2u);
    EXPECT_DOUBLE_EQ(kept[0].phi, 0.3);
    EXPECT_DOUBLE_EQ(kept[1].phi, 0.2);
}

TEST(Filter, SinglePatternAndDuplicates) {
    EXPECT_EQ(greedy_filter({entry(0.1, {1})}, 0.5).size(), 1u);
    auto kept = greedy_filter({entry(0.1, {1, 2}), entry(0.2, {1, 2})}, 0.5);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_DOUBLE_EQ(kept[0].phi, 0.2);
    EXPECT_TRUE(greedy_filter({}, 0.5).empty());
}

TEST(Filter, CapAndArguments) {
    EXPECT_EQ(greedy_filter(abc(), 1.0, 2).size(), 2u);
    EXPECT_THROW(greedy_filter(abc(), 0.0), std::invalid_argument);
    EXPECT_THROW(greedy_filter(abc(), 1.5), std::invalid_argument);
    EXPECT_THROW(filter(ResultSet{abc()}, 0.5, 0), std::invalid_argument);
}

TEST(Filter, TiesBrokenByLengthThenDescription) {
    auto a = from_desc("128 <= a <= 151 AND 23 <= b <= 29", 0.1);
    auto b = from_desc("10 <= c <= 12", 0.1);
    auto kept = greedy_filter({a, b}, 1.0);
    ASSERT_EQ(kept.size(), 2u);
    EXPECT_EQ(kept[0].description, b.description);
}

TEST(Filter, PoolKeepsBestQualityPerDescription) {
    PatternPool pool;
    auto s = Subgroup::of(desc("10 <= c <= 12"), toy());
    EXPECT_TRUE(pool.add(s, 0.1, from_tree));
    EXPECT_FALSE(pool.add(s, 0.2, from_memory));
    ASSERT_EQ(pool.size(), 1u);
    EXPECT_DOUBLE_EQ(pool.entries()[0].phi, 0.2);
    EXPECT_EQ(pool.entries()[0].sources, from_tree | from_memory);
    auto rs = filter(pool, 0.5, 10);
    EXPECT_EQ(rs.entries.size(), 1u);
}

TEST(Redundancy, Examples) {
    EXPECT_NEAR(redundancy(abc(), 0.5), 1.0 / 3, 1e-12);
    EXPECT_DOUBLE_EQ(redundancy({entry(0.1, {1}), entry(0.1, {2})}, 0.5), 0.0);
    std::vector<ResultEntry> copies(4, entry(0.1, {1, 2}));
    EXPECT_DOUBLE_EQ(redundancy(copies, 0.5), 0.75);
    EXPECT_THROW(redundancy({}, 0.5), std::invalid_argument);
}

TEST(Diversity, Examples) {
    EXPECT_DOUBLE_EQ(diversity({}, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(diversity({entry(0.3, {1}), entry(0.2, {2})}, 0.5), 0.5);
    EXPECT_NEAR(diversity(abc(), 0.5), 0.5, 1e-12);
}

TEST(Recovery, Examples) {
    GroundTruth h{{desc("128 <= a <= 151 AND 23 <= b <= 29")}};  // {2,3,5,6}
    EXPECT_DOUBLE_EQ(recovery_qual(h, std::vector<ResultEntry>{}, toy()), 0.0);
    EXPECT_DOUBLE_EQ(recovery_qual(h, {from_desc("128 <= a <= 151 AND 23 <= b <= 29")}, toy()), 1.0);
    // {2,3} vs {2,3,5,6}: 2 / 4
    EXPECT_DOUBLE_EQ(recovery_qual(h, {from_desc("128 <= a <= 136")}, toy()), 0.5);
    EXPECT_THROW(recovery_qual(GroundTruth{}, {from_desc("")}, toy()), std::invalid_argument);
}

TEST(Recovery, MonotoneInFound) {
    GroundTruth h{{desc("128 <= a <= 136"), desc("10 <= c <= 11")}};
    std::vector<ResultEntry> found;
    double last = 0;
    for (const char* t : {"142 <= a <= 152", "128 <= a <= 136", "23 <= b <= 27", "10 <= c <= 11"}) {
        found.push_back(from_desc(t));
        double q = recovery_qual(h, found, toy());
        EXPECT_GE(q, last);
        last = q;
    }
    EXPECT_DOUBLE_EQ(last, 1.0);
}

TEST(Filter, PropertiesOnRandomPools) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ResultEntry> pool;
        std::size_t n = 1 + uniform_index(rng, 25);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> ids;
            for (std::size_t o = 1; o <= 10; ++o)
                if (coin(rng, 0.4)) ids.push_back(o);
            if (ids.empty()) ids.push_back(1 + uniform_index(rng, 10));
            pool.push_back(entry(static_cast<double>(uniform_index(rng, 100)) / 400, ids));
        }
        double theta = 0.1 + 0.9 * static_cast<double>(uniform_index(rng, 10)) / 9;
        std::size_t cap = 1 + uniform_index(rng, 10);
        auto rs = filter(ResultSet{pool}, theta, cap);
        EXPECT_LE(rs.entries.size(), cap);
        for (std::size_t i = 0; i < rs.entries.size(); ++i)
            for (std::size_t j = i + 1; j < rs.entries.size(); ++j) {
                EXPECT_GE(rs.entries[i].phi, rs.entries[j].phi);
                EXPECT_LT(jaccard_sim(rs.entries[i].extent, rs.entries[j].extent), theta);
            }
        EXPECT_DOUBLE_EQ(redundancy(rs.entries, theta), 0.0);
        auto again = filter(rs, theta, cap);
        ASSERT_EQ(again.entries.size(), rs.entries.size());
        for (std::size_t i = 0; i < rs.entries.size(); ++i) EXPECT_EQ(again.entries[i].extent, rs.entries[i].extent);
    }
}

TEST(ResultCsv, HeaderAndRows) {
    ResultSet rs{{from_desc("128 <= a <= 151 AND 23 <= b <= 29", 1.0 / 6)}};
    std::ostringstream out;
    write_result_csv(out, rs, toy());
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "rank,description,support,quality");
    EXPECT_NE(out.str().find("128 <= a <= 151 AND 23 <= b <= 29"), std::string::npos);
}
