#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "sbrp/instance.hpp"
#include "support.hpp"

using namespace sbrp;

namespace {

std::string data_path(const std::string& rel) { return std::string(SBRP_DATA_DIR) + "/" + rel; }

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(ParseInstance, SingleStationThreeFourFive) {
    const Instance inst = parse_instance("1 10\n0 0 0 0\n1 3 4 0\n");
    EXPECT_EQ(inst.n, 1);
    EXPECT_EQ(inst.vehicle_capacity, 10);
    EXPECT_EQ(inst.c(0, 1), 5);
    EXPECT_EQ(inst.c(1, 0), 5);
}

TEST(ParseInstance, DemandSumNonzeroIsRejected) {
    try {
        parse_instance("2 10\n0 0 0 0\n1 1 1 3\n2 2 2 -1\n");
        FAIL() << "expected an error";
    } catch (const InstanceError& e) {
        EXPECT_EQ(e.rule(), "demand sum nonzero");
    }
}

TEST(ParseInstance, ErrorsCarryLineNumbers) {
    const auto line_of = [](const std::string& text) {
        try {
            parse_instance(text);
        } catch (const InstanceError& e) {
            return std::make_pair(e.line(), e.rule());
        }
        return std::make_pair(-1, std::string());
    };
    auto [l1, r1] = line_of("2 10\n0 0 0 0\n1 1 1 2\n1 2 2 -2\n");
    EXPECT_EQ(l1, 4);
    EXPECT_NE(r1.find("duplicate id"), std::string::npos);

    auto [l2, r2] = line_of("1 10\n0 0 0 3\n1 1 1 -3\n");
    EXPECT_EQ(l2, 2);
    EXPECT_EQ(r2, "depot fields nonzero");

    auto [l3, r3] = line_of("1 10\n0 0 0 0\n1 1 x 0\n");
    EXPECT_EQ(l3, 3);
    EXPECT_NE(r3.find("malformed"), std::string::npos);

    auto [l4, r4] = line_of("2 10\n0 0 0 0\n2 1 1 0\n1 1 1 0\n");
    EXPECT_EQ(l4, 3);
    EXPECT_NE(r4.find("out of order"), std::string::npos);
}

TEST(ParseInstance, CommentsAndDecimals) {
    const Instance inst = parse_instance("# header\n2 5\n0 0 0 0\n# depot above\n1 0.5 0 -2\n2 +2.5 0 2\n");
    EXPECT_EQ(inst.c(1, 2), 2);
    EXPECT_EQ(inst.station(2).demand, 2);
}

TEST(ParseInstance, BenchmarkDocument) {
    const Instance inst = parse_instance(read_file(data_path("instances/n20q10D.txt")), 1, "n20q10D");
    EXPECT_EQ(inst.n, 20);
    EXPECT_EQ(inst.vehicle_capacity, 10);
    EXPECT_TRUE(validate(inst).empty());
}

TEST(ParseInstance, RoundTripIsIdentity) {
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        const int alpha = rng.coin() ? 1 : 3;
        Instance inst = testutil::random_instance(rng, rng.uniform(1, 12), 10, 10, alpha);
        const std::string text = serialize_instance(inst);
        const Instance back = parse_instance(text, alpha);
        EXPECT_EQ(serialize_instance(back), text);
        EXPECT_EQ(back.cost, inst.cost);
        for (int i = 0; i <= inst.n; ++i) EXPECT_EQ(back.station(i).target, inst.station(i).target);
    }
}

TEST(ApplyAlpha, FormulaExamples) {
    const auto a = apply_alpha({0, -10, 10, 0}, 1);
    EXPECT_EQ(a[0], (InventoryLevels{0, 0, 0}));
    EXPECT_EQ(a[1], (InventoryLevels{10, 0, 20}));
    EXPECT_EQ(a[3], (InventoryLevels{10, 10, 20}));
    EXPECT_EQ(apply_alpha({0, 10}, 3)[1], (InventoryLevels{30, 60, 60}));
}

TEST(ApplyAlpha, RejectsDemandOutsideRange) {
    EXPECT_THROW(apply_alpha({0, 11}, 1), std::out_of_range);
    EXPECT_THROW(apply_alpha({0, -11}, 2), std::out_of_range);
}

TEST(ApplyAlpha, Homogeneous) {
    for (int d = -10; d <= 10; ++d)
        for (int k = 1; k <= 4; ++k) {
            const auto base = apply_alpha({0, d}, 1)[1];
            const auto scaled = apply_alpha({0, d}, k)[1];
            EXPECT_EQ(scaled.initial, k * base.initial);
            EXPECT_EQ(scaled.target, k * base.target);
            EXPECT_EQ(scaled.capacity, k * base.capacity);
        }
}

TEST(CostMatrix, FlooredExamples) {
    EXPECT_EQ(build_cost_matrix({{0, 0}, {3, 4}})[0][1], 5);
    EXPECT_EQ(build_cost_matrix({{0, 0}, {1, 1}})[0][1], 1);
    EXPECT_THROW(build_cost_matrix({{0, 0}}), std::invalid_argument);
}

TEST(CostMatrix, MatchesIntegerSquareRootTable) {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        std::vector<Point> pts(10);
        for (Point& p : pts) p = {double(rng.uniform(-5000, 5000)), double(rng.uniform(-5000, 5000))};
        const auto c = build_cost_matrix(pts);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j) {
                EXPECT_EQ(c[i][j], testutil::integer_floor_distance(static_cast<long long>(pts[i].x),
                                                                   static_cast<long long>(pts[i].y),
                                                                   static_cast<long long>(pts[j].x),
                                                                   static_cast<long long>(pts[j].y)));
                EXPECT_EQ(c[i][j], c[j][i]);
            }
    }
}

TEST(CostMatrix, PerfectSquaresAreExact) {
    // 3-4-5 multiples sit exactly on the floor boundary
    for (long long k = 1; k < 2000; k += 37) {
        const auto c = build_cost_matrix({{0, 0}, {3.0 * k, 4.0 * k}});
        EXPECT_EQ(c[0][1], 5 * k);
    }
}

TEST(Validate, WellFormedIsOk) {
    Rng rng(1);
    EXPECT_TRUE(validate(testutil::random_instance(rng, 8, 10, 10)).empty());
}

TEST(Validate, ReportsEveryViolation) {
    Instance inst = make_instance_from_levels("bad", 10, {{0, 0}, {1, 0}, {2, 0}},
                                              {{0, 0, 0}, {5, 12, 10}, {20, 14, 8}});
    const auto v = validate(inst);
    EXPECT_TRUE(mentions(v, "station 1: target exceeds capacity"));
    EXPECT_TRUE(mentions(v, "station 2: initial exceeds capacity"));
    EXPECT_TRUE(mentions(v, "demand sum nonzero"));
    EXPECT_GE(v.size(), 3u);
}

TEST(Validate, DemandExceedsStationCapacity) {
    Instance inst = make_instance_from_levels("bad", 10, {{0, 0}, {1, 0}, {2, 0}}, {{0, 0, 0}, {0, 9, 6}, {9, 0, 6}});
    EXPECT_TRUE(mentions(validate(inst), "demand exceeds station capacity"));
}

TEST(Validate, DepotFieldsNonzero) {
    Instance inst = make_instance_from_levels("bad", 10, {{0, 0}, {1, 0}}, {{1, 1, 2}, {3, 3, 6}});
    EXPECT_TRUE(mentions(validate(inst), "depot fields nonzero"));
}

TEST(LegacyLoader, ReadsTsplibLayout) {
    const std::string text =
        "NAME : tiny\nTYPE : PDTSP\nDIMENSION : 3\nCAPACITY : 10\nNODE_COORD_SECTION\n"
        "1 0 0\n2 3 4\n3 6 8\nDEMAND_SECTION\n1 0\n2 4\n3 -4\nEOF\n";
    const Instance inst = parse_legacy_instance(text, 1);
    EXPECT_EQ(inst.name, "tiny");
    EXPECT_EQ(inst.n, 2);
    EXPECT_EQ(inst.vehicle_capacity, 10);
    EXPECT_EQ(inst.station(1).demand, -4);  // pickup-positive in the file
    EXPECT_EQ(inst.station(2).demand, 4);
    EXPECT_EQ(inst.c(0, 2), 10);
}
