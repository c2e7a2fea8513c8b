#include "mts/trapspace.hpp"

#include <stdexcept>

#include "mts/sat/encoding.hpp"
#include "mts/sat/solver.hpp"

namespace mts {

namespace {

constexpr int kBruteForceMaxDim = 12;

// Enumerates the vertices of h in rail order. Callback returns false to
// stop early; the function returns false in that case.
template <typename Fn>
bool for_each_vertex(const Subcube& h, Fn&& fn) {
    int n = h.dim();
    std::vector<int> free_dims;
    for (int i = 0; i < n; ++i)
        if (h.is_free(i))
            free_dims.push_back(i);
    Configuration x(n);
    for (int i = 0; i < n; ++i)
        x[i] = !h.is_free(i) && h.fixed_value(i);
    uint64_t count = uint64_t(1) << free_dims.size();
    for (uint64_t m = 0; m < count; ++m) {
        for (size_t b = 0; b < free_dims.size(); ++b)
            x[free_dims[b]] = (m >> b) & 1;
        if (!fn(x))
            return false;
    }
    return true;
}

}  // namespace

bool can_output(const BooleanNetwork& f, int i, const Subcube& h, bool b) {
    const UnateDnf& fi = f.function(i);
    if (fi.is_constant())
        return *fi.constant == b;
    if (b) {
        for (const auto& clause : fi.clauses) {
            bool compatible = true;
            for (const auto& lit : clause) {
                bool ok = lit.positive ? h.one(lit.var) : h.zero(lit.var);
                if (!ok) {
                    compatible = false;
                    break;
                }
            }
            if (compatible)
                return true;
        }
        return false;
    }
    for (const auto& clause : fi.clauses) {
        bool falsifiable = false;
        for (const auto& lit : clause) {
            if (lit.positive ? h.zero(lit.var) : h.one(lit.var)) {
                falsifiable = true;
                break;
            }
        }
        if (!falsifiable)
            return false;
    }
    return true;
}

bool is_trap_space(const BooleanNetwork& f, const Subcube& h) {
    for (int i = 0; i < f.size(); ++i) {
        if (h.is_free(i))
            continue;
        if (can_output(f, i, h, !h.fixed_value(i)))
            return false;
    }
    return true;
}

Subcube ts_of(const BooleanNetwork& f, const Configuration& x,
              std::vector<Subcube>* trace) {
    int n = f.size();
    Subcube h = Subcube::point(x);
    if (trace)
        trace->push_back(h);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            if (h.is_free(i))
                continue;
            if (can_output(f, i, h, !h.fixed_value(i))) {
                // rails only ever open
                h.set_one(i);
                h.set_zero(i);
                changed = true;
            }
        }
        if (changed && trace)
            trace->push_back(h);
    }
    return h;
}

bool is_minimal(const BooleanNetwork& f, const Subcube& h,
                sat::Solver* engine, Configuration* witness) {
    if (!engine) {
        if (f.size() > kBruteForceMaxDim)
            throw std::runtime_error(
                "is_minimal without an engine is limited to dimension 12");
        return for_each_vertex(h, [&](const Configuration& y) {
            if (ts_of(f, y) != h) {
                if (witness)
                    *witness = y;
                return false;
            }
            return true;
        });
    }

    // single SAT query: a vertex of h whose trap space drops some rail of h
    sat::Solver& s = *engine;
    std::vector<sat::Var> input;
    for (int i = 0; i < f.size(); ++i)
        input.push_back(s.new_var());
    enc::ConcreteSpec spec{&f};
    enc::TsCircuit circuit = enc::encode_ts_circuit(s, spec, input);
    std::vector<sat::Lit> assumptions;
    for (int i = 0; i < f.size(); ++i)
        if (!h.is_free(i))
            assumptions.push_back(sat::lit_eq(input[i], h.fixed_value(i)));
    std::vector<sat::Lit> shrink;
    const enc::Rails& last = circuit.last();
    for (int i = 0; i < f.size(); ++i) {
        if (h.one(i))
            shrink.push_back(sat::neg_lit(last.one[i]));
        if (h.zero(i))
            shrink.push_back(sat::neg_lit(last.zero[i]));
    }
    s.add_clause(std::move(shrink));
    sat::Result r = s.solve(assumptions);
    if (r == sat::Result::Interrupted)
        throw std::runtime_error("engine interrupted during minimality check");
    if (r == sat::Result::Sat && witness)
        *witness = enc::decode_config(s, input);
    return r == sat::Result::Unsat;
}

bool in_mts(const BooleanNetwork& f, const Configuration& x,
            sat::Solver* engine) {
    return is_minimal(f, ts_of(f, x), engine);
}

Subcube descend_to_mts(const BooleanNetwork& f, const Configuration& x,
                       bool use_engine) {
    Subcube h = ts_of(f, x);
    while (true) {
        Configuration y;
        if (use_engine) {
            sat::Solver s;
            if (is_minimal(f, h, &s, &y))
                return h;
        } else {
            if (is_minimal(f, h, nullptr, &y))
                return h;
        }
        h = ts_of(f, y);
    }
}

std::vector<Subcube> enumerate_mts(const BooleanNetwork& f, size_t limit) {
    int n = f.size();
    bool use_engine = n > kBruteForceMaxDim;
    sat::Solver search;  // over the n input bits only
    std::vector<sat::Var> bits;
    for (int i = 0; i < n; ++i)
        bits.push_back(search.new_var());

    std::vector<Subcube> found;
    while (limit == 0 || found.size() < limit) {
        sat::Result r = search.solve();
        if (r != sat::Result::Sat)
            break;
        Configuration x = enc::decode_config(search, bits);
        Subcube m = descend_to_mts(f, x, use_engine);
        bool fresh = true;
        for (const auto& g : found) {
            if (g == m || g.contains(m)) {
                fresh = false;
                break;
            }
        }
        if (fresh) {
            found.push_back(m);
            // exclude every configuration of the cube
            std::vector<sat::Lit> block;
            for (int i = 0; i < n; ++i)
                if (!m.is_free(i))
                    block.push_back(sat::lit_eq(bits[i], !m.fixed_value(i)));
            if (block.empty())
                break;  // the full cube is the unique MTS
            search.add_clause(std::move(block));
        } else {
            // descent escaped into a known cube; drop just this start point
            std::vector<sat::Lit> block;
            for (int i = 0; i < n; ++i)
                block.push_back(sat::lit_eq(bits[i], !x[i]));
            search.add_clause(std::move(block));
        }
    }
    return found;
}

}  // namespace mts
