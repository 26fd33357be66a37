#include <gtest/gtest.h>

#include "sbrp/solution.hpp"
#include "support.hpp"

using namespace sbrp;

namespace {

Instance benchmark() {
    return parse_instance(read_file(std::string(SBRP_DATA_DIR) + "/instances/n20q10D.txt"), 1, "n20q10D");
}

}  // namespace

TEST(RouteCost, SumsArcs) {
    const Instance inst = make_instance("line", 10, {{0, 0}, {3, 4}, {6, 8}}, {0, -1, 1}, 1);
    EXPECT_EQ(route_cost({0, 0}, inst), 0);
    EXPECT_EQ(route_cost({0, 1, 2, 0}, inst), 5 + 5 + 10);
    EXPECT_EQ(route_cost({0, 2, 1, 2, 0}, inst), 10 + 5 + 5 + 10);
}

TEST(Solution, ReferenceRouteCost) {
    const Instance inst = benchmark();
    const Solution s =
        make_solution({0, 1, 8, 20, 3, 7, 2, 13, 5, 12, 10, 12, 14, 17, 6, 4, 16, 9, 15, 19, 18, 1, 0}, inst);
    EXPECT_TRUE(s.feasible);
    EXPECT_EQ(s.cost, 5989);
    EXPECT_EQ(s.objective(), 5989);
    EXPECT_EQ(s.visits(), 21);
    EXPECT_EQ(s.visit_count[12], 2);
    EXPECT_EQ(s.visit_count[11], 0);
}

TEST(Solution, MissingStationIsInfeasible) {
    const Instance inst = benchmark();
    Route r{0};
    for (int i = 1; i <= inst.n; ++i)
        if (i != 5) r.push_back(i);
    r.push_back(0);
    ASSERT_NE(inst.station(5).demand, 0);
    const Solution s = make_solution(r, inst);
    EXPECT_FALSE(s.feasible);
    EXPECT_EQ(s.objective(), kInfeasibleCost);
    EXPECT_EQ(s.cost, route_cost(r, inst));
}

TEST(Solution, RebuildIsIdempotent) {
    Rng rng(8);
    for (int t = 0; t < 200; ++t) {
        const Instance inst = testutil::random_small_instance(rng, rng.uniform(1, 6), rng.uniform(1, 10), 10);
        const Solution s = make_solution(testutil::random_route(rng, inst.n, 10), inst);
        const Solution again = rebuild_bookkeeping(s, inst);
        EXPECT_EQ(again.operations, s.operations);
        EXPECT_EQ(again.loads, s.loads);
        EXPECT_EQ(again.visit_count, s.visit_count);
        EXPECT_EQ(again.cost, s.cost);
        EXPECT_EQ(again.feasible, s.feasible);
    }
}

TEST(Solution, SerializeParseRoundTrip) {
    Rng rng(12);
    for (int t = 0; t < 100; ++t) {
        const Instance inst = testutil::random_small_instance(rng, rng.uniform(1, 6), rng.uniform(1, 10), 10);
        const Solution s = make_solution(testutil::random_route(rng, inst.n, 10), inst);
        const SolutionRecord rec = parse_solution(serialize_solution(s));
        EXPECT_EQ(rec.cost, s.cost);
        EXPECT_EQ(rec.feasible, s.feasible);
        EXPECT_EQ(rec.route, s.route);
        EXPECT_EQ(rec.operations, s.operations);
        ASSERT_EQ(rec.loads_after.size(), s.route.size());
        for (std::size_t j = 0; j < s.loads.size(); ++j) EXPECT_EQ(rec.loads_after[j], s.loads[j]);
        EXPECT_EQ(rec.loads_after.back(), 0);
    }
}

TEST(Solution, ParseRejectsMalformedDocuments) {
    EXPECT_THROW(parse_solution(""), InstanceError);
    EXPECT_THROW(parse_solution("cost 5 feasible 2\n"), InstanceError);
    EXPECT_THROW(parse_solution("cost 5 feasible 1\n0 0\n"), InstanceError);
    EXPECT_NO_THROW(parse_solution("# note\ncost 0 feasible 1\n0 0 0\n0 0 0\n"));
}

TEST(Solution, CollapseAdjacentDuplicates) {
    Route r{0, 3, 3, 2, 2, 2, 3, 0};
    collapse_adjacent_duplicates(r);
    EXPECT_EQ(r, (Route{0, 3, 2, 3, 0}));
    EXPECT_FALSE(has_adjacent_duplicates(r));
    Route empty{0, 0};
    collapse_adjacent_duplicates(empty);
    EXPECT_EQ(empty, (Route{0, 0}));
}

TEST(Solution, TwoOptDeltaMatchesRecomputedCost) {
    // on a symmetric matrix reversing r[i..j] changes only the two boundary arcs
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const Instance inst = testutil::random_instance(rng, 8, 10, 5);
        Route r{0};
        for (int i = 1; i <= inst.n; ++i) r.push_back(i);
        r.push_back(0);
        rng.shuffle(r);
        std::erase(r, 0);
        r.insert(r.begin(), 0);
        r.push_back(0);
        const int i = rng.uniform(1, inst.n - 1), j = rng.uniform(i + 1, inst.n);
        Route rev = r;
        std::reverse(rev.begin() + i, rev.begin() + j + 1);
        const Cost delta = inst.c(r[i - 1], r[j]) + inst.c(r[i], r[j + 1]) - inst.c(r[i - 1], r[i]) - inst.c(r[j], r[j + 1]);
        EXPECT_EQ(route_cost(rev, inst) - route_cost(r, inst), delta);
    }
}
