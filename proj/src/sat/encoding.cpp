#include "mts/sat/encoding.hpp"

#include <algorithm>
#include <stdexcept>

namespace mts::enc {

using sat::lit_eq;
using sat::neg_lit;
using sat::pos_lit;

namespace {

// Defined literal for the conjunction of `lits` (full Tseitin, both
// polarities, to keep unit propagation complete).
Lit make_and(Solver& s, const std::vector<Lit>& lits) {
    if (lits.empty())
        return s.true_lit();
    if (lits.size() == 1)
        return lits[0];
    Var a = s.new_var();
    std::vector<Lit> back{pos_lit(a)};
    for (Lit l : lits) {
        s.add_clause(neg_lit(a), l);
        back.push_back(~l);
    }
    s.add_clause(std::move(back));
    return pos_lit(a);
}

Lit make_or(Solver& s, const std::vector<Lit>& lits) {
    if (lits.empty())
        return ~s.true_lit();
    if (lits.size() == 1)
        return lits[0];
    Var o = s.new_var();
    std::vector<Lit> fwd{neg_lit(o)};
    for (Lit l : lits) {
        s.add_clause(pos_lit(o), ~l);
        fwd.push_back(l);
    }
    s.add_clause(std::move(fwd));
    return pos_lit(o);
}

// out <-> (t1 | t2 | ... )
void define_or(Solver& s, Lit out, const std::vector<Lit>& terms) {
    std::vector<Lit> fwd{~out};
    for (Lit t : terms) {
        s.add_clause(out, ~t);
        fwd.push_back(t);
    }
    s.add_clause(std::move(fwd));
}

// Rail carrying the satisfiability of a DNF literal inside the layer cube:
// x_j needs the one-rail, !x_j the zero-rail.
Lit sat_rail(const Rails& layer, const DnfLiteral& l) {
    return pos_lit(l.positive ? layer.one[l.var] : layer.zero[l.var]);
}
// Rail carrying its falsifiability.
Lit fals_rail(const Rails& layer, const DnfLiteral& l) {
    return pos_lit(l.positive ? layer.zero[l.var] : layer.one[l.var]);
}

Lit eval_dnf(Solver& s, const UnateDnf& f, const Rails& layer, bool target) {
    if (f.is_constant())
        return *f.constant == target ? s.true_lit() : ~s.true_lit();
    if (target) {
        // some clause fully compatible with the cube
        std::vector<Lit> per_clause;
        per_clause.reserve(f.clauses.size());
        for (const auto& c : f.clauses) {
            std::vector<Lit> rails;
            rails.reserve(c.size());
            for (const auto& l : c)
                rails.push_back(sat_rail(layer, l));
            per_clause.push_back(make_and(s, rails));
        }
        return make_or(s, per_clause);
    }
    // every clause falsifiable somewhere in the cube; unateness makes the
    // per-clause tests independent (take the extreme point)
    std::vector<Lit> per_clause;
    per_clause.reserve(f.clauses.size());
    for (const auto& c : f.clauses) {
        std::vector<Lit> rails;
        rails.reserve(c.size());
        for (const auto& l : c)
            rails.push_back(fals_rail(layer, l));
        per_clause.push_back(make_or(s, rails));
    }
    return make_and(s, per_clause);
}

Lit eval_synth(Solver& s, const SynthSpec& spec, int i, const Rails& layer,
               bool target) {
    const auto& regs = spec.regulators[i];
    if (regs.empty())
        return Lit(spec.constant[i], !target);
    std::vector<Lit> per_clause;
    per_clause.reserve(spec.sel[i].size());
    for (size_t c = 0; c < spec.sel[i].size(); ++c) {
        Lit used = pos_lit(spec.used[i][c]);
        if (target) {
            // clause usable and every selected literal compatible
            Var u = s.new_var();
            s.add_clause(neg_lit(u), used);
            std::vector<Lit> back{pos_lit(u), ~used};
            for (size_t e = 0; e < regs.size(); ++e) {
                Lit sel = pos_lit(spec.sel[i][c][e]);
                Lit rail = pos_lit(regs[e].second ? layer.one[regs[e].first]
                                                  : layer.zero[regs[e].first]);
                s.add_clause(neg_lit(u), ~sel, rail);
                // bad_e: selected but incompatible
                Var bad = s.new_var();
                s.add_clause(neg_lit(bad), sel);
                s.add_clause(neg_lit(bad), ~rail);
                s.add_clause(pos_lit(bad), ~sel, rail);
                back.push_back(pos_lit(bad));
            }
            s.add_clause(std::move(back));
            per_clause.push_back(pos_lit(u));
        } else {
            // unused, or some selected literal falsifiable
            std::vector<Lit> hits;
            for (size_t e = 0; e < regs.size(); ++e) {
                Lit sel = pos_lit(spec.sel[i][c][e]);
                Lit rail = pos_lit(regs[e].second ? layer.zero[regs[e].first]
                                                  : layer.one[regs[e].first]);
                hits.push_back(make_and(s, {sel, rail}));
            }
            hits.push_back(~used);
            per_clause.push_back(make_or(s, hits));
        }
    }
    return target ? make_or(s, per_clause) : make_and(s, per_clause);
}

}  // namespace

PerturbSpec make_perturb_spec(Solver& s, const BooleanNetwork& bn,
                              const std::set<int>& controllable) {
    PerturbSpec spec;
    spec.bn = &bn;
    spec.clamped.assign(bn.size(), kNoVar);
    spec.value.assign(bn.size(), kNoVar);
    for (int i : controllable) {
        spec.clamped[i] = s.new_var();
        spec.value[i] = s.new_var();
    }
    return spec;
}

SynthSpec make_synth_spec(Solver& s, const InfluenceGraph& g, SynthMode mode,
                          int clause_budget) {
    if (clause_budget < 1)
        throw std::invalid_argument("clause budget must be at least 1");
    if (!g.locally_monotone())
        throw std::invalid_argument("influence graph is not locally monotone");
    SynthSpec spec;
    spec.n = g.n;
    spec.mode = mode;
    spec.clause_budget = clause_budget;
    spec.regulators.resize(g.n);
    for (const auto& [src, dst] : g.pos_edges)
        spec.regulators[dst].emplace_back(src, true);
    for (const auto& [src, dst] : g.neg_edges)
        spec.regulators[dst].emplace_back(src, false);
    for (auto& regs : spec.regulators)
        std::sort(regs.begin(), regs.end());

    spec.sel.resize(g.n);
    spec.used.resize(g.n);
    spec.constant.assign(g.n, kNoVar);
    for (int i = 0; i < g.n; ++i) {
        if (spec.regulators[i].empty()) {
            spec.constant[i] = s.new_var();
            continue;
        }
        spec.sel[i].resize(clause_budget);
        spec.used[i].resize(clause_budget);
        for (int c = 0; c < clause_budget; ++c) {
            spec.used[i][c] = s.new_var();
            spec.sel[i][c].resize(spec.regulators[i].size());
            for (size_t e = 0; e < spec.regulators[i].size(); ++e)
                spec.sel[i][c][e] = s.new_var();
        }
    }
    return spec;
}

void encode_synth_structure(Solver& s, const SynthSpec& spec) {
    for (int i = 0; i < spec.n; ++i) {
        const auto& regs = spec.regulators[i];
        if (regs.empty())
            continue;
        int budget = static_cast<int>(spec.sel[i].size());
        for (int c = 0; c < budget; ++c) {
            // used <-> some literal selected
            std::vector<Lit> any{neg_lit(spec.used[i][c])};
            for (Var v : spec.sel[i][c]) {
                s.add_clause(neg_lit(v), pos_lit(spec.used[i][c]));
                any.push_back(pos_lit(v));
            }
            s.add_clause(std::move(any));
            // prefix activation
            if (c > 0)
                s.add_clause(neg_lit(spec.used[i][c]), pos_lit(spec.used[i][c - 1]));
        }
        // no constant functions for regulated components
        s.add_clause(pos_lit(spec.used[i][0]));
        if (spec.mode == SynthMode::Exact) {
            for (size_t e = 0; e < regs.size(); ++e) {
                std::vector<Lit> cover;
                for (int c = 0; c < budget; ++c)
                    cover.push_back(pos_lit(spec.sel[i][c][e]));
                s.add_clause(std::move(cover));
            }
        }
        // lexicographic ordering between adjacent selector rows
        for (int c = 0; c + 1 < budget; ++c) {
            const auto& a = spec.sel[i][c];
            const auto& b = spec.sel[i][c + 1];
            Lit eq_prefix = s.true_lit();
            for (size_t e = 0; e < a.size(); ++e) {
                // under an equal prefix, row c+1 may not exceed row c
                s.add_clause(~eq_prefix, neg_lit(b[e]), pos_lit(a[e]));
                if (e + 1 < a.size()) {
                    Var eq = s.new_var();
                    s.add_clause({~eq_prefix, neg_lit(a[e]), neg_lit(b[e]),
                                  pos_lit(eq)});
                    s.add_clause({~eq_prefix, pos_lit(a[e]), pos_lit(b[e]),
                                  pos_lit(eq)});
                    eq_prefix = pos_lit(eq);
                }
            }
        }
    }
}

Lit encode_fun_eval(Solver& s, const FunctionSpec& spec, int i,
                    const Rails& layer, bool target) {
    if (const auto* c = std::get_if<ConcreteSpec>(&spec))
        return eval_dnf(s, c->bn->function(i), layer, target);
    if (const auto* p = std::get_if<PerturbSpec>(&spec))
        return eval_dnf(s, p->bn->function(i), layer, target);
    return eval_synth(s, std::get<SynthSpec>(spec), i, layer, target);
}

TsCircuit encode_ts_circuit(Solver& s, const FunctionSpec& spec,
                            std::vector<Var> input) {
    int n = static_cast<int>(input.size());
    TsCircuit circuit;
    circuit.n = n;
    circuit.input = std::move(input);
    circuit.layers.resize(n + 1);
    for (auto& layer : circuit.layers) {
        layer.one.resize(n);
        layer.zero.resize(n);
        for (int i = 0; i < n; ++i) {
            layer.one[i] = s.new_var();
            layer.zero[i] = s.new_var();
        }
    }
    // layer 0 ties the rails to the input configuration
    for (int i = 0; i < n; ++i) {
        Lit x = pos_lit(circuit.input[i]);
        Lit one0 = pos_lit(circuit.layers[0].one[i]);
        Lit zero0 = pos_lit(circuit.layers[0].zero[i]);
        s.add_clause(~one0, x);
        s.add_clause(one0, ~x);
        s.add_clause(~zero0, ~x);
        s.add_clause(zero0, x);
    }

    const auto* perturb = std::get_if<PerturbSpec>(&spec);
    for (int t = 0; t < n; ++t) {
        const Rails& cur = circuit.layers[t];
        const Rails& next = circuit.layers[t + 1];
        for (int i = 0; i < n; ++i) {
            Lit can1 = encode_fun_eval(s, spec, i, cur, true);
            Lit can0 = encode_fun_eval(s, spec, i, cur, false);
            bool clamp = perturb && perturb->clamped[i] != kNoVar;
            if (clamp) {
                Lit cl = pos_lit(perturb->clamped[i]);
                Lit val = pos_lit(perturb->value[i]);
                Lit grow1 = make_and(s, {can1, ~cl});
                Lit force1 = make_and(s, {cl, val});
                define_or(s, pos_lit(next.one[i]),
                          {pos_lit(cur.one[i]), grow1, force1});
                Lit grow0 = make_and(s, {can0, ~cl});
                Lit force0 = make_and(s, {cl, ~val});
                define_or(s, pos_lit(next.zero[i]),
                          {pos_lit(cur.zero[i]), grow0, force0});
            } else {
                define_or(s, pos_lit(next.one[i]), {pos_lit(cur.one[i]), can1});
                define_or(s, pos_lit(next.zero[i]), {pos_lit(cur.zero[i]), can0});
            }
        }
    }
    return circuit;
}

void encode_marker_on_cube(Solver& s, const TsCircuit& circuit,
                           const PartialAssignment& m) {
    const Rails& last = circuit.last();
    for (const auto& [i, b] : m) {
        s.add_clause(pos_lit(b ? last.one[i] : last.zero[i]));
        s.add_clause(neg_lit(b ? last.zero[i] : last.one[i]));
    }
}

void encode_strict_containment(Solver& s, const TsCircuit& outer,
                               const TsCircuit& inner) {
    const Rails& out = outer.last();
    const Rails& in = inner.last();
    std::vector<Lit> diff;
    for (int i = 0; i < outer.n; ++i) {
        for (auto [ov, iv] : {std::pair{out.one[i], in.one[i]},
                              std::pair{out.zero[i], in.zero[i]}}) {
            s.add_clause(neg_lit(iv), pos_lit(ov));  // containment
            Var d = s.new_var();
            s.add_clause(neg_lit(d), pos_lit(ov));
            s.add_clause(neg_lit(d), neg_lit(iv));
            s.add_clause(pos_lit(d), neg_lit(ov), pos_lit(iv));
            diff.push_back(pos_lit(d));
        }
    }
    s.add_clause(std::move(diff));  // strictness
}

CardinalityLadder::CardinalityLadder(Solver& s, std::vector<Var> vars, int k_max)
    : vars_(std::move(vars)), k_max_(k_max) {
    int n = static_cast<int>(vars_.size());
    activation_.assign(k_max_ + 1, kNoVar);
    count_ge_.resize(n);
    auto width = [&](int i) { return std::min(i + 1, k_max_ + 1); };
    for (int i = 0; i < n; ++i) {
        count_ge_[i].resize(width(i));
        for (int j = 0; j < width(i); ++j)
            count_ge_[i][j] = s.new_var();
        s.add_clause(neg_lit(vars_[i]), pos_lit(count_ge_[i][0]));
        if (i > 0) {
            for (int j = 0; j < width(i - 1); ++j)
                s.add_clause(neg_lit(count_ge_[i - 1][j]),
                             pos_lit(count_ge_[i][j]));
            for (int j = 1; j < width(i); ++j)
                s.add_clause(neg_lit(vars_[i]),
                             neg_lit(count_ge_[i - 1][j - 1]),
                             pos_lit(count_ge_[i][j]));
        }
    }
}

Lit CardinalityLadder::assume_at_most(Solver& s, int k) {
    int n = static_cast<int>(vars_.size());
    if (k >= n)
        return s.true_lit();
    if (k > k_max_)
        throw std::out_of_range("cardinality bound above ladder width");
    if (activation_[k] == kNoVar) {
        activation_[k] = s.new_var();
        s.add_clause(neg_lit(activation_[k]), neg_lit(count_ge_[n - 1][k]));
    }
    return pos_lit(activation_[k]);
}

Subcube decode_cube(const Solver& s, const Rails& layer) {
    int n = static_cast<int>(layer.one.size());
    Subcube h(n);
    for (int i = 0; i < n; ++i) {
        if (s.model_value(layer.one[i]))
            h.set_one(i);
        if (s.model_value(layer.zero[i]))
            h.set_zero(i);
    }
    return h;
}

Configuration decode_config(const Solver& s, const std::vector<Var>& input) {
    Configuration x(input.size());
    for (size_t i = 0; i < input.size(); ++i)
        x[i] = s.model_value(input[i]);
    return x;
}

PartialAssignment decode_perturbation(const Solver& s, const PerturbSpec& spec) {
    PartialAssignment p;
    for (size_t i = 0; i < spec.clamped.size(); ++i) {
        if (spec.clamped[i] != kNoVar && s.model_value(spec.clamped[i]))
            p[static_cast<int>(i)] = s.model_value(spec.value[i]);
    }
    return p;
}

BooleanNetwork decode_network(const Solver& s, const SynthSpec& spec,
                              const std::vector<std::string>& names) {
    std::vector<UnateDnf> functions;
    for (int i = 0; i < spec.n; ++i) {
        const auto& regs = spec.regulators[i];
        if (regs.empty()) {
            functions.push_back(
                UnateDnf::make_constant(s.model_value(spec.constant[i])));
            continue;
        }
        UnateDnf f;
        for (size_t c = 0; c < spec.sel[i].size(); ++c) {
            if (!s.model_value(spec.used[i][c]))
                continue;
            DnfClause clause;
            for (size_t e = 0; e < regs.size(); ++e) {
                if (s.model_value(spec.sel[i][c][e]))
                    clause.push_back(DnfLiteral{regs[e].first, regs[e].second});
            }
            std::sort(clause.begin(), clause.end());
            f.clauses.push_back(std::move(clause));
        }
        // clause structure is kept verbatim (no subsumption removal) so the
        // syntactic influence graph of the decoded BN mirrors the selectors
        functions.push_back(std::move(f));
    }
    return BooleanNetwork(names, std::move(functions));
}

}  // namespace mts::enc
