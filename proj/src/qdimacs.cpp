#include "mts/qdimacs.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mts/sat/solver.hpp"

namespace mts::qbf {

namespace {

using Cnf = std::vector<std::vector<int>>;

constexpr size_t kDistributionCap = 100000;

/// CNF <-> DNF switch by full distribution: pick one literal from every
/// group. Groups hold plain positive rail variables, so no tautology
/// pruning is needed; duplicates are dropped.
Cnf distribute(const Cnf& groups) {
    size_t bound = 1;
    for (const auto& g : groups) {
        bound *= g.size();
        if (bound > kDistributionCap)
            throw std::runtime_error("local function too wide for export");
    }
    Cnf out{{}};
    for (const auto& g : groups) {
        Cnf next;
        for (const auto& partial : out) {
            for (int lit : g) {
                auto extended = partial;
                if (std::find(extended.begin(), extended.end(), lit) ==
                    extended.end())
                    extended.push_back(lit);
                next.push_back(std::move(extended));
            }
        }
        out = std::move(next);
    }
    return out;
}

/// Terms (DNF) of "some vertex of the cube with the given rails gets
/// value `target` from fi".
Cnf reach_dnf(const UnateDnf& fi, bool target, const std::vector<int>& one,
              const std::vector<int>& zero) {
    if (fi.is_constant())
        return *fi.constant == target ? Cnf{{}} : Cnf{};
    if (target) {
        Cnf terms;
        for (const auto& clause : fi.clauses) {
            std::vector<int> t;
            for (const auto& lit : clause)
                t.push_back(lit.positive ? one[lit.var] : zero[lit.var]);
            terms.push_back(std::move(t));
        }
        return terms;
    }
    // value 0 is reached iff every clause is falsifiable: a conjunction
    // of rail disjunctions, turned into terms by distribution
    Cnf groups;
    for (const auto& clause : fi.clauses) {
        std::vector<int> g;
        for (const auto& lit : clause)
            g.push_back(lit.positive ? zero[lit.var] : one[lit.var]);
        groups.push_back(std::move(g));
    }
    return distribute(groups);
}

/// Clauses (CNF) of the same condition.
Cnf reach_cnf(const UnateDnf& fi, bool target, const std::vector<int>& one,
              const std::vector<int>& zero) {
    if (fi.is_constant())
        return *fi.constant == target ? Cnf{} : Cnf{{}};
    if (!target) {
        Cnf clauses;
        for (const auto& clause : fi.clauses) {
            std::vector<int> c;
            for (const auto& lit : clause)
                c.push_back(lit.positive ? zero[lit.var] : one[lit.var]);
            clauses.push_back(std::move(c));
        }
        return clauses;
    }
    return distribute(reach_dnf(fi, true, one, zero));
}

struct Builder {
    const BooleanNetwork& f;
    const PartialAssignment& m;
    QbfModel q;
    int next_var = 1;

    std::vector<int> clamp, value;  // 0 when uncontrollable
    std::vector<int> x, y;
    std::vector<std::vector<int>> hx1, hx0, hy1, hy0;  // [layer][i]
    std::vector<int> d1, d0;

    Builder(const BooleanNetwork& f, const PartialAssignment& m)
        : f(f), m(m) {}

    int fresh() { return next_var++; }

    void add(std::vector<int> c) { q.clauses.push_back(std::move(c)); }

    /// C weakened by "or x matches m": one copy of C per marker entry,
    /// each extended with that entry's satisfied-marker literal.
    void add_guarded(const std::vector<int>& c) {
        for (const auto& [i, b] : m) {
            auto copy = c;
            copy.push_back(b ? x[i] : -x[i]);
            add(std::move(copy));
        }
    }

    /// One saturation step for a single rail. `value_lit` is the clamp
    /// target literal matching the rail polarity (0 when uncontrollable).
    void emit_update(int h_next, int h_cur, const Cnf& dnf, const Cnf& cnf,
                     int clamp_var, int value_lit) {
        add({-h_cur, h_next});
        if (clamp_var != 0)
            add({-clamp_var, -value_lit, h_next});
        for (const auto& t : dnf) {
            std::vector<int> c;
            if (clamp_var != 0)
                c.push_back(clamp_var);
            for (int lit : t)
                c.push_back(-lit);
            c.push_back(h_next);
            add(std::move(c));
        }
        if (clamp_var == 0) {
            for (const auto& e : cnf) {
                std::vector<int> c{-h_next, h_cur};
                c.insert(c.end(), e.begin(), e.end());
                add(std::move(c));
            }
        } else {
            add({-h_next, h_cur, value_lit, -clamp_var});
            for (const auto& e : cnf) {
                std::vector<int> c{-h_next, h_cur, clamp_var};
                c.insert(c.end(), e.begin(), e.end());
                add(std::move(c));
            }
            for (const auto& e : cnf) {
                std::vector<int> c{-h_next, h_cur, value_lit};
                c.insert(c.end(), e.begin(), e.end());
                add(std::move(c));
            }
        }
    }

    void emit_circuit(const std::vector<int>& input,
                      std::vector<std::vector<int>>& h1,
                      std::vector<std::vector<int>>& h0) {
        int n = f.size();
        for (int i = 0; i < n; ++i) {
            add({-h1[0][i], input[i]});
            add({h1[0][i], -input[i]});
            add({-h0[0][i], -input[i]});
            add({h0[0][i], input[i]});
        }
        for (int t = 0; t < n; ++t) {
            for (int i = 0; i < n; ++i) {
                Cnf d1f = reach_dnf(f.function(i), true, h1[t], h0[t]);
                Cnf c1f = reach_cnf(f.function(i), true, h1[t], h0[t]);
                Cnf d0f = reach_dnf(f.function(i), false, h1[t], h0[t]);
                Cnf c0f = reach_cnf(f.function(i), false, h1[t], h0[t]);
                emit_update(h1[t + 1][i], h1[t][i], d1f, c1f, clamp[i],
                            clamp[i] ? value[i] : 0);
                emit_update(h0[t + 1][i], h0[t][i], d0f, c0f, clamp[i],
                            clamp[i] ? -value[i] : 0);
            }
        }
    }

    QbfModel build(int k, const ExportOptions& options) {
        int n = f.size();
        q.n = n;

        clamp.assign(n, 0);
        value.assign(n, 0);
        for (int i = 0; i < n; ++i) {
            if (options.uncontrollable.count(i))
                continue;
            if (options.forbid_marker_nodes && m.count(i))
                continue;
            clamp[i] = fresh();
            value[i] = fresh();
            q.exists_outer.push_back(clamp[i]);
            q.exists_outer.push_back(value[i]);
        }
        int outer_end = next_var - 1;

        for (int i = 0; i < n; ++i) {
            x.push_back(fresh());
            q.forall_vars.push_back(x.back());
        }

        auto alloc_layers = [&](std::vector<std::vector<int>>& h1,
                                std::vector<std::vector<int>>& h0) {
            h1.assign(n + 1, std::vector<int>(n));
            h0.assign(n + 1, std::vector<int>(n));
            for (int t = 0; t <= n; ++t)
                for (int i = 0; i < n; ++i) {
                    h1[t][i] = fresh();
                    h0[t][i] = fresh();
                }
        };
        alloc_layers(hx1, hx0);
        for (int i = 0; i < n; ++i)
            y.push_back(fresh());
        alloc_layers(hy1, hy0);
        for (int i = 0; i < n; ++i) {
            d1.push_back(fresh());
            d0.push_back(fresh());
        }
        q.non_cardinality_vars = next_var - 1;

        emit_circuit(x, hx1, hx0);
        emit_circuit(y, hy1, hy0);

        if (!m.empty()) {
            // witness y ranges inside the trap space of x
            for (int i = 0; i < n; ++i) {
                add_guarded({-y[i], hx1[n][i]});
                add_guarded({y[i], hx0[n][i]});
            }
            // diff: a rail open for x but not for y
            std::vector<int> any;
            for (int i = 0; i < n; ++i) {
                add({-d1[i], hx1[n][i]});
                add({-d1[i], -hy1[n][i]});
                add({d1[i], -hx1[n][i], hy1[n][i]});
                add({-d0[i], hx0[n][i]});
                add({-d0[i], -hy0[n][i]});
                add({d0[i], -hx0[n][i], hy0[n][i]});
                any.push_back(d1[i]);
                any.push_back(d0[i]);
            }
            add_guarded(any);
        }

        // at most k clamps (Sinz sequential counter)
        std::vector<int> clamps;
        for (int i = 0; i < n; ++i)
            if (clamp[i] != 0)
                clamps.push_back(clamp[i]);
        int nv = static_cast<int>(clamps.size());
        if (k < nv) {
            if (k == 0) {
                for (int v : clamps)
                    add({-v});
            } else {
                std::vector<std::vector<int>> s(nv, std::vector<int>(k));
                for (auto& row : s)
                    for (int& v : row)
                        v = fresh();
                add({-clamps[0], s[0][0]});
                for (int i = 1; i < nv; ++i) {
                    add({-clamps[i], s[i][0]});
                    for (int j = 0; j < k; ++j)
                        add({-s[i - 1][j], s[i][j]});
                    for (int j = 1; j < k; ++j)
                        add({-clamps[i], -s[i - 1][j - 1], s[i][j]});
                    add({-clamps[i], -s[i - 1][k - 1]});
                }
            }
        }
        q.num_vars = next_var - 1;

        for (int v = outer_end + n + 1; v <= q.num_vars; ++v)
            q.exists_inner.push_back(v);

        q.header.push_back("universal marker reprogramming, n=" +
                           std::to_string(n) + ", k=" + std::to_string(k));
        q.header.push_back("vars 1.." + std::to_string(outer_end) +
                           ": clamp/value pairs (outer exists)");
        q.header.push_back("vars " + std::to_string(outer_end + 1) + ".." +
                           std::to_string(outer_end + n) +
                           ": configuration x (forall)");
        q.header.push_back(
            "vars " + std::to_string(outer_end + n + 1) + ".." +
            std::to_string(q.non_cardinality_vars) +
            ": trap-space rails of x, witness y, rails of y, diff");
        q.header.push_back("vars " + std::to_string(q.non_cardinality_vars + 1) +
                           ".." + std::to_string(q.num_vars) +
                           ": cardinality counters (inner exists; QDIMACS has "
                           "no native cardinality)");
        return std::move(q);
    }
};

}  // namespace

QbfModel build_reprogramming_qbf(const BooleanNetwork& f,
                                 const PartialAssignment& m, int k,
                                 const ExportOptions& options) {
    if (!f.locally_monotone())
        throw std::invalid_argument("network is not locally monotone");
    if (k < 0 || k > f.size())
        throw std::invalid_argument("perturbation size bound out of range");
    Builder b(f, m);
    return b.build(k, options);
}

std::string to_text(const QbfModel& q) {
    std::ostringstream out;
    for (const auto& line : q.header)
        out << "c " << line << "\n";
    out << "p cnf " << q.num_vars << " " << q.clauses.size() << "\n";
    auto quant_line = [&](char ch, const std::vector<int>& vars) {
        if (vars.empty())
            return;
        out << ch;
        for (int v : vars)
            out << " " << v;
        out << " 0\n";
    };
    quant_line('e', q.exists_outer);
    quant_line('a', q.forall_vars);
    quant_line('e', q.exists_inner);
    for (const auto& c : q.clauses) {
        for (int lit : c)
            out << lit << " ";
        out << "0\n";
    }
    return out.str();
}

ParsedQdimacs parse_qdimacs(const std::string& text) {
    ParsedQdimacs p;
    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    bool in_clauses = false;
    std::set<int> quantified;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c')
            continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            if (saw_header)
                throw std::runtime_error("duplicate problem line");
            std::string tag, fmt;
            if (!(ls >> tag >> fmt >> p.num_vars >> p.num_clauses) ||
                fmt != "cnf")
                throw std::runtime_error("malformed problem line");
            saw_header = true;
            continue;
        }
        if (!saw_header)
            throw std::runtime_error("clause or prefix before problem line");
        if (line[0] == 'a' || line[0] == 'e') {
            if (in_clauses)
                throw std::runtime_error("quantifier line after clauses");
            char ch;
            ls >> ch;
            std::vector<int> vars;
            int v;
            while (ls >> v && v != 0) {
                if (v < 1 || v > p.num_vars)
                    throw std::runtime_error("quantified variable out of range");
                if (!quantified.insert(v).second)
                    throw std::runtime_error("variable quantified twice");
                vars.push_back(v);
            }
            if (v != 0)
                throw std::runtime_error("unterminated quantifier line");
            p.prefix.emplace_back(ch, std::move(vars));
            continue;
        }
        in_clauses = true;
        std::vector<int> clause;
        int lit;
        bool terminated = false;
        while (ls >> lit) {
            if (lit == 0) {
                terminated = true;
                break;
            }
            if (std::abs(lit) > p.num_vars)
                throw std::runtime_error("literal out of range");
            clause.push_back(lit);
        }
        if (!terminated)
            throw std::runtime_error("unterminated clause");
        p.clauses.push_back(std::move(clause));
    }
    if (!saw_header)
        throw std::runtime_error("missing problem line");
    if (static_cast<int>(p.clauses.size()) != p.num_clauses)
        throw std::runtime_error("clause count mismatch");
    return p;
}

bool expansion_satisfiable(const QbfModel& q) {
    int n = q.n;
    if (n > 10)
        throw std::runtime_error("expansion check limited to dimension 10");

    // 0 unused, 1 outer, 2 forall, 3 inner
    std::vector<int> kind(q.num_vars + 1, 0);
    std::vector<int> pos(q.num_vars + 1, -1);
    for (size_t i = 0; i < q.exists_outer.size(); ++i)
        kind[q.exists_outer[i]] = 1;
    for (size_t i = 0; i < q.forall_vars.size(); ++i) {
        kind[q.forall_vars[i]] = 2;
        pos[q.forall_vars[i]] = static_cast<int>(i);
    }
    for (int v : q.exists_inner)
        kind[v] = 3;

    sat::Solver s;
    std::vector<sat::Var> outer(q.num_vars + 1, -1);
    for (int v : q.exists_outer)
        outer[v] = s.new_var();

    for (uint32_t a = 0; a < (uint32_t(1) << n); ++a) {
        std::vector<sat::Var> inner(q.num_vars + 1, -1);
        for (int v : q.exists_inner)
            inner[v] = s.new_var();
        for (const auto& clause : q.clauses) {
            std::vector<sat::Lit> lits;
            bool satisfied = false;
            for (int lit : clause) {
                int v = std::abs(lit);
                bool want = lit > 0;
                if (kind[v] == 2) {
                    if (bool((a >> pos[v]) & 1) == want) {
                        satisfied = true;
                        break;
                    }
                    continue;  // false literal drops out
                }
                sat::Var sv = kind[v] == 1 ? outer[v] : inner[v];
                lits.push_back(sat::lit_eq(sv, want));
            }
            if (!satisfied)
                s.add_clause(std::move(lits));
        }
        if (!s.okay())
            return false;
    }
    return s.solve() == sat::Result::Sat;
}

}  // namespace mts::qbf
