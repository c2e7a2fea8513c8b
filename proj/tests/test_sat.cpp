#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "mts/sat/solver.hpp"

using namespace mts::sat;

namespace {

/// Exhaustive reference check of a CNF over few variables.
bool brute_sat(int nvars, const std::vector<std::vector<Lit>>& cnf) {
    for (uint32_t a = 0; a < (uint32_t(1) << nvars); ++a) {
        bool all = true;
        for (const auto& c : cnf) {
            bool sat = false;
            for (Lit l : c)
                if (bool((a >> l.var()) & 1) != l.sign()) {
                    sat = true;
                    break;
                }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all)
            return true;
    }
    return false;
}

}  // namespace

TEST_CASE("trivial formulas") {
    Solver s;
    Var a = s.new_var(), b = s.new_var();
    CHECK(s.add_clause(pos_lit(a), pos_lit(b)));
    CHECK(s.solve() == Result::Sat);
    CHECK(s.add_clause(neg_lit(a)));
    // the second unit conflicts at root level; add_clause may report it
    s.add_clause(neg_lit(b));
    CHECK(s.solve() == Result::Unsat);
    CHECK_FALSE(s.okay());
    CHECK(s.solve() == Result::Unsat);
}

TEST_CASE("pigeonhole 5 into 4 is unsatisfiable") {
    const int holes = 4, pigeons = 5;
    Solver s;
    std::vector<std::vector<Var>> v(pigeons, std::vector<Var>(holes));
    for (auto& row : v)
        for (auto& x : row)
            x = s.new_var();
    for (int p = 0; p < pigeons; ++p) {
        std::vector<Lit> some;
        for (int h = 0; h < holes; ++h)
            some.push_back(pos_lit(v[p][h]));
        s.add_clause(std::move(some));
    }
    for (int h = 0; h < holes; ++h)
        for (int p = 0; p < pigeons; ++p)
            for (int q = p + 1; q < pigeons; ++q)
                s.add_clause(neg_lit(v[p][h]), neg_lit(v[q][h]));
    CHECK(s.solve() == Result::Unsat);
}

TEST_CASE("random 3-SAT agrees with brute force") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int round = 0; round < 200; ++round) {
        int nvars = 4 + round % 6;
        int nclauses = 2 + static_cast<int>(rng() % (4 * nvars));
        Solver s;
        for (int i = 0; i < nvars; ++i)
            s.new_var();
        std::vector<std::vector<Lit>> cnf;
        bool ok = true;
        for (int c = 0; c < nclauses; ++c) {
            std::vector<Lit> clause;
            int width = 1 + static_cast<int>(rng() % 3);
            for (int l = 0; l < width; ++l)
                clause.push_back(
                    Lit(static_cast<Var>(rng() % nvars), coin(rng) != 0));
            cnf.push_back(clause);
            ok = s.add_clause(clause) && ok;
        }
        bool want = brute_sat(nvars, cnf);
        Result got = s.solve();
        CHECK(got == (want ? Result::Sat : Result::Unsat));
        if (got == Result::Sat) {
            // model satisfies every clause
            for (const auto& c : cnf) {
                bool sat = false;
                for (Lit l : c)
                    if (s.model_value(l.var()) != l.sign())
                        sat = true;
                CHECK(sat);
            }
        }
    }
}

TEST_CASE("assumptions are per-call and non-destructive") {
    Solver s;
    Var a = s.new_var(), b = s.new_var();
    s.add_clause(pos_lit(a), pos_lit(b));
    CHECK(s.solve({neg_lit(a)}) == Result::Sat);
    CHECK(s.model_value(b));
    CHECK(s.solve({neg_lit(b)}) == Result::Sat);
    CHECK(s.model_value(a));
    CHECK(s.solve({neg_lit(a), neg_lit(b)}) == Result::Unsat);
    CHECK(s.solve() == Result::Sat);  // formula itself untouched
}

TEST_CASE("incremental clause addition across solves") {
    std::mt19937 rng(5);
    Solver s;
    const int nvars = 8;
    for (int i = 0; i < nvars; ++i)
        s.new_var();
    std::vector<std::vector<Lit>> cnf;
    for (int step = 0; step < 40; ++step) {
        std::vector<Lit> clause;
        for (int l = 0; l < 3; ++l)
            clause.push_back(Lit(static_cast<Var>(rng() % nvars), rng() % 2));
        cnf.push_back(clause);
        s.add_clause(clause);
        CHECK((s.solve() == Result::Sat) == brute_sat(nvars, cnf));
        if (!s.okay())
            break;
    }
}

TEST_CASE("propagate_only runs zero decisions and finds implied literals") {
    Solver s;
    Var a = s.new_var(), b = s.new_var(), c = s.new_var();
    s.add_clause(neg_lit(a), pos_lit(b));
    s.add_clause(neg_lit(b), pos_lit(c));
    auto fixed = s.propagate_only({pos_lit(a)});
    REQUIRE(fixed.has_value());
    bool saw_b = false, saw_c = false;
    for (Lit l : *fixed) {
        if (l == pos_lit(b))
            saw_b = true;
        if (l == pos_lit(c))
            saw_c = true;
    }
    CHECK(saw_b);
    CHECK(saw_c);
    CHECK(s.stats().decisions == 0);
    // conflicting assumptions
    s.add_clause(neg_lit(c));
    CHECK_FALSE(s.propagate_only({pos_lit(a)}).has_value());
}

TEST_CASE("true_lit is constant across the solve") {
    Solver s;
    Lit t = s.true_lit();
    Var a = s.new_var();
    s.add_clause(~t, pos_lit(a));
    REQUIRE(s.solve() == Result::Sat);
    CHECK(s.model_value(a));
}

TEST_CASE("deadline interrupts long searches") {
    // a hard pigeonhole instance with an immediate deadline
    const int holes = 9, pigeons = 10;
    Solver s;
    std::vector<std::vector<Var>> v(pigeons, std::vector<Var>(holes));
    for (auto& row : v)
        for (auto& x : row)
            x = s.new_var();
    for (int p = 0; p < pigeons; ++p) {
        std::vector<Lit> some;
        for (int h = 0; h < holes; ++h)
            some.push_back(pos_lit(v[p][h]));
        s.add_clause(std::move(some));
    }
    for (int h = 0; h < holes; ++h)
        for (int p = 0; p < pigeons; ++p)
            for (int q = p + 1; q < pigeons; ++q)
                s.add_clause(neg_lit(v[p][h]), neg_lit(v[q][h]));
    s.set_deadline(std::chrono::steady_clock::now() +
                   std::chrono::milliseconds(50));
    CHECK(s.solve() == Result::Interrupted);
    s.clear_deadline();
}
