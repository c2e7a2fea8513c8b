#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "mts/cegar.hpp"
#include "mts/oracle.hpp"
#include "mts/trapspace.hpp"
#include "support/random_bn.hpp"

using namespace mts;
using cegar::Options;
using cegar::RefinementVariant;
using cegar::Status;

namespace {

const char* kEx2 =
    "x1, !x2\nx2, !x1\nx3, x1 & !x2 & !x4\nx4, x3 | x5\nx5, !x3 & x5\n";

Configuration cfg(const std::string& bits) {
    Configuration x;
    for (char c : bits)
        x.push_back(c == '1');
    return x;
}

std::vector<PartialAssignment> sorted(std::vector<PartialAssignment> v) {
    std::sort(v.begin(), v.end());
    return v;
}

Options with_variant(RefinementVariant v) {
    Options o;
    o.variant = v;
    return o;
}

}  // namespace

TEST_CASE("counter-example search is sound") {
    BooleanNetwork f = BooleanNetwork::parse_bnet(kEx2);
    PartialAssignment m{{1, true}, {2, true}};

    // clamping x3 alone leaves an escaping minimal trap space
    BooleanNetwork g1 = f.perturbed({{2, true}});
    auto ce = cegar::find_counter_example(g1, m);
    REQUIRE(ce.has_value());
    CHECK_FALSE(matches(*ce, m));
    CHECK(in_mts(g1, *ce));

    // the known repair has none
    BooleanNetwork g2 = f.perturbed({{2, true}, {0, false}});
    CHECK_FALSE(cegar::find_counter_example(g2, m).has_value());
}

TEST_CASE("counter-example search on the identity network") {
    // every configuration is its own minimal trap space
    BooleanNetwork f = BooleanNetwork::parse_bnet("a, a\nb, b\n");
    auto ce = cegar::find_counter_example(f, {{0, true}});
    REQUIRE(ce.has_value());
    CHECK((*ce)[0] == false);
    CHECK(in_mts(f, *ce));
}

TEST_CASE("empty marker never has a counter-example") {
    std::mt19937 rng(71);
    BooleanNetwork f = testing::random_bn(rng, 5);
    CHECK_FALSE(cegar::find_counter_example(f, {}).has_value());
}

TEST_CASE("counter-example search agrees with the oracle predicate") {
    std::mt19937 rng(73);
    for (int inst = 0; inst < 40; ++inst) {
        BooleanNetwork f = testing::random_bn(rng, 3 + inst % 5);
        PartialAssignment m = testing::random_marker(rng, f.size());
        auto ce = cegar::find_counter_example(f, m);
        CHECK(ce.has_value() == !oracle::all_mts_match(f, m));
        if (ce) {
            CHECK_FALSE(matches(*ce, m));
            CHECK(in_mts(f, *ce));
        }
    }
}

TEST_CASE("reprogramming decision on the worked example") {
    BooleanNetwork f = BooleanNetwork::parse_bnet(kEx2);
    PartialAssignment m{{1, true}, {2, true}};
    Options o;  // marker nodes controllable by default at the library level

    auto r0 = cegar::solve_reprogramming(f, m, 0, o);
    CHECK(r0.status == Status::Unsat);

    auto r2 = cegar::solve_reprogramming(f, m, 2, o);
    REQUIRE(r2.status == Status::Sat);
    REQUIRE(r2.solutions.size() == 1);
    CHECK(oracle::all_mts_match(f.perturbed(r2.solutions[0]), m));

    auto all = cegar::enumerate_reprogramming(f, m, 2, o);
    REQUIRE(all.status == Status::Sat);
    auto sols = sorted(all.solutions);
    REQUIRE(sols.size() == 2);
    CHECK(sols[0] == PartialAssignment{{0, false}, {2, true}});
    CHECK(sols[1] == PartialAssignment{{1, true}, {2, true}});
}

TEST_CASE("option flags prune the candidate space") {
    BooleanNetwork f = BooleanNetwork::parse_bnet(kEx2);
    PartialAssignment m{{1, true}, {2, true}};

    Options forbid;
    forbid.forbid_marker_nodes = true;
    CHECK(cegar::solve_reprogramming(f, m, 2, forbid).status == Status::Unsat);

    Options unc;
    unc.uncontrollable = {0, 1};
    CHECK(cegar::solve_reprogramming(f, m, 2, unc).status == Status::Unsat);
}

TEST_CASE("enumeration matches the exhaustive oracle on random instances") {
    std::mt19937 rng(79);
    for (int inst = 0; inst < 25; ++inst) {
        BooleanNetwork f = testing::random_bn(rng, 3 + inst % 4);
        PartialAssignment m = testing::random_marker(rng, f.size());
        auto want = sorted(oracle::brute_reprogramming(f, m, 2));
        for (auto variant : {RefinementVariant::V0, RefinementVariant::V1,
                             RefinementVariant::V2}) {
            auto got = cegar::enumerate_reprogramming(f, m, 2,
                                                      with_variant(variant));
            REQUIRE(got.status != Status::Timeout);
            CHECK(sorted(got.solutions) == want);
        }
    }
}

TEST_CASE("every refinement is driven by a genuine counter-example") {
    std::mt19937 rng(83);
    for (int inst = 0; inst < 10; ++inst) {
        BooleanNetwork f = testing::random_bn(rng, 5);
        PartialAssignment m = testing::random_marker(rng, 5);
        auto r = cegar::solve_reprogramming(f, m, 2);
        for (const Configuration& ce : r.stats.ce_log)
            CHECK_FALSE(matches(ce, m));
        CHECK(r.stats.counter_examples == r.stats.ce_log.size());
        CHECK(r.stats.refinements <= r.stats.counter_examples);
    }
}

TEST_CASE("timeouts surface as a status, not an exception") {
    std::mt19937 rng(89);
    BooleanNetwork f = testing::random_bn(rng, 60, 3);
    PartialAssignment m{{0, true}, {1, true}, {2, true}};
    Options o;
    o.timeout = std::chrono::milliseconds(1);
    auto r = cegar::solve_reprogramming(f, m, 3, o);
    CHECK((r.status == Status::Timeout || r.status == Status::Sat ||
           r.status == Status::Unsat));
}

TEST_CASE("argument validation") {
    BooleanNetwork f = BooleanNetwork::parse_bnet("a, a\nb, b\n");
    CHECK_THROWS_AS(cegar::solve_reprogramming(f, {}, -1),
                    std::invalid_argument);
    CHECK_THROWS_AS(cegar::solve_reprogramming(f, {}, 3),
                    std::invalid_argument);
}

TEST_CASE("synthesis against the oracle on tiny graphs") {
    std::mt19937 rng(97);
    std::vector<std::string> names{"a", "b", "c"};
    for (int inst = 0; inst < 12; ++inst) {
        BooleanNetwork f = testing::random_bn(rng, 3);
        InfluenceGraph g = f.influence_graph();
        PartialAssignment m = testing::random_marker(rng, 3);
        for (auto mode : {enc::SynthMode::Subset, enc::SynthMode::Exact}) {
            auto want = oracle::brute_synthesis(g, mode, 2, m, names);
            auto got = cegar::solve_synthesis(g, names, mode, 2, m);
            REQUIRE((got.status == Status::Sat || got.status == Status::Unsat));
            CHECK((got.status == Status::Sat) == want.sat);
            if (got.status == Status::Sat) {
                REQUIRE(got.witness.has_value());
                CHECK(oracle::all_mts_match(*got.witness, m));
            }
        }
    }
}

TEST_CASE("synthesis witness respects the influence graph in subset mode") {
    InfluenceGraph g;
    g.n = 2;
    g.pos_edges = {{0, 1}};
    auto got = cegar::solve_synthesis(g, {"a", "b"}, enc::SynthMode::Subset, 2,
                                      {{1, true}});
    REQUIRE(got.status == Status::Sat);
    InfluenceGraph gd = got.witness->influence_graph();
    for (auto e : gd.pos_edges)
        CHECK(g.pos_edges.count(e) == 1);
    CHECK(gd.neg_edges.empty());
}

TEST_CASE("refinement variants only differ in effort, never in the answer") {
    std::mt19937 rng(101);
    for (int inst = 0; inst < 10; ++inst) {
        BooleanNetwork f = testing::random_bn(rng, 6);
        PartialAssignment m = testing::random_marker(rng, 6);
        std::optional<Status> first;
        for (auto variant : {RefinementVariant::V0, RefinementVariant::V1,
                             RefinementVariant::V2}) {
            auto r = cegar::solve_reprogramming(f, m, 2, with_variant(variant));
            REQUIRE((r.status == Status::Sat || r.status == Status::Unsat));
            if (!first)
                first = r.status;
            CHECK(r.status == *first);
            if (r.status == Status::Sat)
                CHECK(oracle::all_mts_match(f.perturbed(r.solutions[0]), m));
        }
    }
}
