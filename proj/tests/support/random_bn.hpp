#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mts/bn.hpp"

namespace mts::testing {

/// Random locally monotone network: every component gets up to
/// `max_degree` distinct regulators, each with a fixed sign, and a small
/// random unate DNF over them. Components without regulators become
/// constants.
inline BooleanNetwork random_bn(std::mt19937& rng, int n, int max_degree = 3) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<std::string> names;
    std::vector<UnateDnf> functions;
    for (int i = 0; i < n; ++i)
        names.push_back("v" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
        std::uniform_int_distribution<int> deg_dist(0, max_degree);
        int deg = deg_dist(rng);
        if (deg == 0) {
            functions.push_back(UnateDnf::make_constant(coin(rng) != 0));
            continue;
        }
        std::vector<int> pool(n);
        for (int j = 0; j < n; ++j)
            pool[j] = j;
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<DnfLiteral> regs;
        for (int e = 0; e < deg; ++e)
            regs.push_back({pool[e], coin(rng) != 0});

        UnateDnf f;
        std::uniform_int_distribution<int> nclauses_dist(1, 3);
        int nclauses = nclauses_dist(rng);
        for (int c = 0; c < nclauses; ++c) {
            DnfClause clause;
            for (const auto& lit : regs)
                if (coin(rng))
                    clause.push_back(lit);
            if (clause.empty())
                clause.push_back(regs[std::uniform_int_distribution<int>(
                    0, deg - 1)(rng)]);
            std::sort(clause.begin(), clause.end());
            f.clauses.push_back(std::move(clause));
        }
        f.normalize();
        functions.push_back(std::move(f));
    }
    return BooleanNetwork(std::move(names), std::move(functions));
}

/// Random marker over up to `max_size` distinct components.
inline PartialAssignment random_marker(std::mt19937& rng, int n,
                                       int max_size = 2) {
    std::uniform_int_distribution<int> size_dist(1, max_size);
    std::uniform_int_distribution<int> comp(0, n - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    PartialAssignment m;
    int size = size_dist(rng);
    while (static_cast<int>(m.size()) < size)
        m[comp(rng)] = coin(rng) != 0;
    return m;
}

}  // namespace mts::testing
