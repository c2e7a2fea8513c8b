#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "mts/cegar.hpp"
#include "mts/qdimacs.hpp"
#include "support/random_bn.hpp"

using namespace mts;

namespace {

const char* kEx1 = "a, b\nb, a\nc, !d & (a | b)\nd, !c\n";
const char* kEx2 =
    "x1, !x2\nx2, !x1\nx3, x1 & !x2 & !x4\nx4, x3 | x5\nx5, !x3 & x5\n";

}  // namespace

TEST_CASE("variable budget of the aux-free encoding") {
    BooleanNetwork f = BooleanNetwork::parse_bnet(kEx1);
    qbf::QbfModel q = qbf::build_reprogramming_qbf(f, {{3, true}}, 2);
    const int n = 4;
    // 2n clamp/value + n forall + 2n(n+1) rails + n witness + 2n(n+1)
    // witness rails + 2n diff
    CHECK(q.n == n);
    CHECK(q.non_cardinality_vars ==
          2 * n + n + 2 * n * (n + 1) + n + 2 * n * (n + 1) + 2 * n);
    CHECK(q.non_cardinality_vars == 104);
    CHECK(q.num_vars >= q.non_cardinality_vars);
    CHECK(q.exists_outer.size() == size_t(2 * n));
    CHECK(q.forall_vars.size() == size_t(n));

    // the prefix partitions 1..num_vars
    std::set<int> seen;
    for (const auto* block : {&q.exists_outer, &q.forall_vars, &q.exists_inner})
        for (int v : *block) {
            CHECK(v >= 1);
            CHECK(v <= q.num_vars);
            CHECK(seen.insert(v).second);
        }
    CHECK(seen.size() == size_t(q.num_vars));
    for (const auto& c : q.clauses) {
        CHECK_FALSE(c.empty());
        for (int l : c)
            CHECK(seen.count(std::abs(l)));
    }
}

TEST_CASE("uncontrollable components shrink the outer block") {
    BooleanNetwork f = BooleanNetwork::parse_bnet(kEx1);
    qbf::ExportOptions o;
    o.uncontrollable = {0, 1};
    qbf::QbfModel q = qbf::build_reprogramming_qbf(f, {{3, true}}, 2, o);
    CHECK(q.exists_outer.size() == 4);
    qbf::QbfModel full = qbf::build_reprogramming_qbf(f, {{3, true}}, 2);
    CHECK(q.num_vars < full.num_vars);
}

TEST_CASE("text round trip") {
    BooleanNetwork f = BooleanNetwork::parse_bnet(kEx2);
    qbf::QbfModel q =
        qbf::build_reprogramming_qbf(f, {{1, true}, {2, true}}, 2);
    qbf::ParsedQdimacs p = qbf::parse_qdimacs(qbf::to_text(q));
    CHECK(p.num_vars == q.num_vars);
    CHECK(p.num_clauses == int(q.clauses.size()));
    REQUIRE(p.prefix.size() == 3);
    CHECK(p.prefix[0].first == 'e');
    CHECK(p.prefix[1].first == 'a');
    CHECK(p.prefix[2].first == 'e');
    CHECK(p.prefix[0].second == q.exists_outer);
    CHECK(p.prefix[1].second == q.forall_vars);
    CHECK(p.prefix[2].second == q.exists_inner);
    CHECK(p.clauses == q.clauses);
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(qbf::parse_qdimacs("p cnf x 1\n1 0\n"), std::runtime_error);
    // clause count mismatch
    CHECK_THROWS_AS(qbf::parse_qdimacs("p cnf 2 2\ne 1 2 0\n1 0\n"),
                    std::runtime_error);
    // unterminated clause
    CHECK_THROWS_AS(qbf::parse_qdimacs("p cnf 2 1\ne 1 2 0\n1 2\n"),
                    std::runtime_error);
    // doubly quantified variable
    CHECK_THROWS_AS(qbf::parse_qdimacs("p cnf 2 1\ne 1 0\na 1 2 0\n1 0\n"),
                    std::runtime_error);
    // literal out of range
    CHECK_THROWS_AS(qbf::parse_qdimacs("p cnf 2 1\ne 1 2 0\n3 0\n"),
                    std::runtime_error);
    // well-formed input parses
    CHECK_NOTHROW(qbf::parse_qdimacs("c note\np cnf 2 1\ne 1 2 0\n-1 2 0\n"));
}

TEST_CASE("expansion decision on the worked example") {
    BooleanNetwork f = BooleanNetwork::parse_bnet(kEx2);
    PartialAssignment m{{1, true}, {2, true}};
    CHECK(qbf::expansion_satisfiable(qbf::build_reprogramming_qbf(f, m, 2)));
    CHECK_FALSE(
        qbf::expansion_satisfiable(qbf::build_reprogramming_qbf(f, m, 0)));
    qbf::ExportOptions forbid;
    forbid.forbid_marker_nodes = true;
    CHECK_FALSE(qbf::expansion_satisfiable(
        qbf::build_reprogramming_qbf(f, m, 2, forbid)));
}

TEST_CASE("expansion agrees with the refinement loop on random instances") {
    std::mt19937 rng(103);
    for (int inst = 0; inst < 15; ++inst) {
        int n = 3 + inst % 3;
        BooleanNetwork f = testing::random_bn(rng, n);
        PartialAssignment m = testing::random_marker(rng, n);
        if (m.empty())
            m.emplace(0, true);
        int k = inst % 3;
        bool qsat =
            qbf::expansion_satisfiable(qbf::build_reprogramming_qbf(f, m, k));
        auto r = cegar::solve_reprogramming(f, m, k);
        REQUIRE((r.status == cegar::Status::Sat ||
                 r.status == cegar::Status::Unsat));
        CHECK(qsat == (r.status == cegar::Status::Sat));
    }
}
