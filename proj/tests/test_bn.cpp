#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mts/bn.hpp"
#include "mts/subcube.hpp"
#include "support/random_bn.hpp"

using namespace mts;

namespace {

const char* kEx1 = "a, b\nb, a\nc, !d & (a | b)\nd, !c\n";
const char* kEx2 =
    "x1, !x2\nx2, !x1\nx3, x1 & !x2 & !x4\nx4, x3 | x5\nx5, !x3 & x5\n";

Configuration cfg(const std::string& bits) {
    Configuration x;
    for (char c : bits)
        x.push_back(c == '1');
    return x;
}

}  // namespace

TEST_CASE("bnet parsing round-trips") {
    for (const char* text : {kEx1, kEx2}) {
        BooleanNetwork f = BooleanNetwork::parse_bnet(text);
        BooleanNetwork g = BooleanNetwork::parse_bnet(f.to_bnet());
        CHECK(f == g);
    }
}

TEST_CASE("parser accepts constants, comments and headers") {
    BooleanNetwork f = BooleanNetwork::parse_bnet(
        "# comment\ntargets, factors\na, 1\nb, a & a\n");
    CHECK(f.size() == 2);
    CHECK(f.function(0).is_constant());
    CHECK(*f.function(0).constant == true);
    CHECK(f.eval_local(1, cfg("10")) == true);
}

TEST_CASE("parser rejects non-unate and malformed input") {
    CHECK_THROWS_AS(BooleanNetwork::parse_bnet("a, b & !b\nb, a\n"),
                    std::exception);
    CHECK_THROWS_AS(BooleanNetwork::parse_bnet("a, (b\nb, a\n"), ParseError);
    CHECK_THROWS_AS(BooleanNetwork::parse_bnet("a, undefined_name\n"),
                    std::exception);
    // XOR expanded as DNF uses both signs of each variable
    CHECK_THROWS_AS(
        BooleanNetwork::parse_bnet("a, (a & !b) | (!a & b)\nb, a\n"),
        std::exception);
}

TEST_CASE("local evaluation on the worked examples") {
    BooleanNetwork f1 = BooleanNetwork::parse_bnet(kEx1);
    CHECK(f1.eval_local(2, cfg("1100")) == true);  // !d & (a|b)
    BooleanNetwork f2 = BooleanNetwork::parse_bnet(kEx2);
    CHECK(f2.eval_local(3, cfg("10110")) == true);
    // 10110 is a fixed point of f2 with component 3 clamped to 1
    BooleanNetwork g = f2.perturbed({{2, true}});
    CHECK(g.image(cfg("10110")) == cfg("10110"));
}

TEST_CASE("influence graphs of the worked examples") {
    BooleanNetwork f1 = BooleanNetwork::parse_bnet(kEx1);
    InfluenceGraph g1 = f1.influence_graph();
    CHECK(g1.pos_edges ==
          std::set<std::pair<int, int>>{{1, 0}, {0, 1}, {0, 2}, {1, 2}});
    CHECK(g1.neg_edges == std::set<std::pair<int, int>>{{3, 2}, {2, 3}});
    CHECK(f1.locally_monotone());

    BooleanNetwork f2 = BooleanNetwork::parse_bnet(kEx2);
    InfluenceGraph g2 = f2.influence_graph();
    CHECK(g2.pos_edges ==
          std::set<std::pair<int, int>>{{0, 2}, {2, 3}, {4, 3}, {4, 4}});
    CHECK(g2.neg_edges == std::set<std::pair<int, int>>{
                              {1, 0}, {0, 1}, {1, 2}, {3, 2}, {2, 4}});
    CHECK(f2.locally_monotone());
}

TEST_CASE("syntactic influences match the semantic witness definition") {
    std::mt19937 rng(7);
    for (int inst = 0; inst < 30; ++inst) {
        int n = 2 + inst % 5;
        BooleanNetwork f = testing::random_bn(rng, n);
        InfluenceGraph g = f.influence_graph();
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                // semantic: some configuration where toggling i toggles f_j
                bool pos = false, neg = false;
                for (uint32_t c = 0; c < (uint32_t(1) << n); ++c) {
                    if ((c >> i) & 1)
                        continue;
                    Configuration lo(n), hi(n);
                    for (int t = 0; t < n; ++t)
                        lo[t] = hi[t] = (c >> t) & 1;
                    hi[i] = 1;
                    bool flo = f.eval_local(j, lo), fhi = f.eval_local(j, hi);
                    if (!flo && fhi)
                        pos = true;
                    if (flo && !fhi)
                        neg = true;
                }
                CHECK(g.pos_edges.count({i, j}) == size_t(pos));
                CHECK(g.neg_edges.count({i, j}) == size_t(neg));
            }
        }
    }
}

TEST_CASE("perturbation composition law") {
    std::mt19937 rng(11);
    BooleanNetwork f = testing::random_bn(rng, 6);
    PartialAssignment p{{0, true}, {2, false}};
    PartialAssignment q{{2, true}, {4, false}};
    CHECK(f.perturbed(p).perturbed(q) ==
          f.perturbed(override_assignment(p, q)));
    CHECK(f.perturbed({}) == f);
}

TEST_CASE("marker matching") {
    PartialAssignment m{{1, true}, {2, true}};
    CHECK(matches(cfg("01110"), m));
    CHECK_FALSE(matches(cfg("01010"), m));
    CHECK(matches(cfg("00000"), PartialAssignment{}));
    for (const char* bits : {"01110", "01010"})
        CHECK(matches(cfg(bits), m) ==
              matches(Subcube::point(cfg(bits)), m));
}
