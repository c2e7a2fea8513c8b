#include "mts/cegar.hpp"

#include <chrono>
#include <stdexcept>

#include "mts/sat/solver.hpp"
#include "mts/trapspace.hpp"

namespace mts::cegar {

using enc::FunctionSpec;
using enc::Rails;
using enc::TsCircuit;
using sat::Lit;
using sat::Result;
using sat::Solver;
using sat::Var;
using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool past(const Deadline& d) { return d && Clock::now() >= *d; }

/// Counter-example search against a fixed concrete network. One solver
/// holds the saturation circuit. The marker-violation clause is guarded
/// by `act_violate` and the generalized blocks by `act_blocks`, so the
/// embedded minimality queries are constrained by neither.
///
/// Strategy: sample a marker-violating start, then descend along strict
/// shrink witnesses (preferring witnesses that still violate the marker)
/// until a minimal trap space is reached. A minimal cube that fails the
/// marker yields a counter-example vertex directly; one that matches it
/// is already unreachable for future samples through the marker clause.
/// Every shrink step additionally teaches the search that any image
/// strictly containing the smaller trap space is non-minimal.
struct CeSearch {
    const BooleanNetwork& g;
    const PartialAssignment& m;
    Solver s;
    std::vector<Var> input;
    TsCircuit circuit;
    Lit act_violate;
    Lit act_blocks;

    CeSearch(const BooleanNetwork& g, const PartialAssignment& m)
        : g(g), m(m) {
        for (int i = 0; i < g.size(); ++i)
            input.push_back(s.new_var());
        circuit = enc::encode_ts_circuit(s, enc::ConcreteSpec{&g}, input);
        act_violate = sat::pos_lit(s.new_var());
        act_blocks = sat::pos_lit(s.new_var());
        std::vector<Lit> violates{~act_violate};
        for (const auto& [i, b] : m)
            violates.push_back(sat::lit_eq(input[i], !b));
        s.add_clause(std::move(violates));
    }

    /// Forbid final-layer images that strictly contain `t`: such an image
    /// would be a trap space with `t` strictly inside, hence non-minimal.
    /// Never excludes a minimal image.
    void block_strict_supersets(const Subcube& t) {
        const Rails& last = circuit.last();
        Var aux = s.new_var();  // aux -> image adds no rail outside t
        std::vector<Lit> any_missing{~act_blocks};
        for (int i = 0; i < g.size(); ++i) {
            if (t.one(i))
                any_missing.push_back(sat::neg_lit(last.one[i]));
            else
                s.add_clause(sat::neg_lit(aux), sat::neg_lit(last.one[i]));
            if (t.zero(i))
                any_missing.push_back(sat::neg_lit(last.zero[i]));
            else
                s.add_clause(sat::neg_lit(aux), sat::neg_lit(last.zero[i]));
        }
        any_missing.push_back(sat::pos_lit(aux));
        s.add_clause(std::move(any_missing));
    }

    /// One strict-shrink query on h: a vertex of h whose trap space
    /// misses a rail of h, additionally violating the marker when
    /// `prefer_violating`. The shrink clause is retired before returning.
    Result shrink_step(const Subcube& h, bool prefer_violating,
                       CegarStats* stats) {
        const Rails& last = circuit.last();
        Var act = s.new_var();
        std::vector<Lit> shrink{sat::neg_lit(act)};
        std::vector<Lit> assume{sat::pos_lit(act)};
        if (prefer_violating)
            assume.push_back(act_violate);
        for (int i = 0; i < g.size(); ++i) {
            if (h.one(i))
                shrink.push_back(sat::neg_lit(last.one[i]));
            if (h.zero(i))
                shrink.push_back(sat::neg_lit(last.zero[i]));
            if (!h.is_free(i))
                assume.push_back(sat::lit_eq(input[i], h.fixed_value(i)));
        }
        s.add_clause(std::move(shrink));
        Result r = s.solve(assume);
        if (stats)
            stats->ce_solves++;
        s.add_clause(sat::neg_lit(act));
        return r;
    }

    // nullopt on exhaustion; sets *timed_out instead of a result when the
    // deadline fires.
    std::optional<Configuration> run(CegarStats* stats, const Deadline& deadline,
                                     bool* timed_out) {
        while (true) {
            if (past(deadline)) {
                *timed_out = true;
                return std::nullopt;
            }
            if (deadline)
                s.set_deadline(*deadline);
            Result r = s.solve({act_violate, act_blocks});
            if (stats)
                stats->ce_solves++;
            if (r == Result::Interrupted) {
                *timed_out = true;
                return std::nullopt;
            }
            if (r == Result::Unsat)
                return std::nullopt;
            Configuration x = enc::decode_config(s, input);

            // descend to a minimal trap space below x
            while (true) {
                if (past(deadline)) {
                    *timed_out = true;
                    return std::nullopt;
                }
                Subcube h = ts_of(g, x);
                Result rm = shrink_step(h, true, stats);
                if (rm == Result::Sat) {
                    x = enc::decode_config(s, input);
                    block_strict_supersets(ts_of(g, x));
                    continue;
                }
                if (rm == Result::Interrupted) {
                    *timed_out = true;
                    return std::nullopt;
                }
                rm = shrink_step(h, false, stats);
                if (rm == Result::Sat) {
                    x = enc::decode_config(s, input);
                    block_strict_supersets(ts_of(g, x));
                    continue;
                }
                if (rm == Result::Interrupted) {
                    *timed_out = true;
                    return std::nullopt;
                }
                // h is minimal
                if (!matches(h, m)) {
                    // a vertex of h violating the marker lies in a
                    // minimal trap space: a genuine counter-example
                    for (const auto& [i, b] : m)
                        if (h.is_free(i))
                            x[i] = !b;
                    return x;
                }
                // every vertex of h matches the marker; the marker
                // clause already excludes them from future samples, and
                // anything strictly above h is non-minimal
                block_strict_supersets(h);
                break;
            }
        }
    }
};

std::optional<Configuration> find_ce(const BooleanNetwork& g,
                                     const PartialAssignment& m,
                                     CegarStats* stats, const Deadline& deadline,
                                     bool* timed_out) {
    if (m.empty())
        return std::nullopt;  // every configuration matches the empty marker
    CeSearch search(g, m);
    return search.run(stats, deadline, timed_out);
}

class ReprogrammingLoop {
public:
    ReprogrammingLoop(const BooleanNetwork& f, const PartialAssignment& m,
                      int k, const Options& options)
        : f_(f), m_(m), options_(options) {
        int n = f.size();
        std::set<int> controllable;
        for (int i = 0; i < n; ++i) {
            if (options.uncontrollable.count(i))
                continue;
            if (options.forbid_marker_nodes && m.count(i))
                continue;
            controllable.insert(i);
        }
        spec_ = enc::make_perturb_spec(s_, f, controllable);
        for (int i = 0; i < n; ++i)
            witness_.push_back(s_.new_var());
        circuit_ = enc::encode_ts_circuit(s_, FunctionSpec{spec_}, witness_);
        enc::encode_marker_on_cube(s_, circuit_, m);
        std::vector<Var> clamps;
        for (Var v : spec_.clamped)
            if (v != enc::kNoVar)
                clamps.push_back(v);
        int k_max = std::min(k, static_cast<int>(clamps.size()));
        ladder_ = enc::CardinalityLadder(s_, std::move(clamps), k_max);
    }

    ReprogrammingResult run(int k, bool enumerate) {
        ReprogrammingResult res;
        Deadline deadline;
        if (options_.timeout)
            deadline = Clock::now() + *options_.timeout;
        for (int kp = enumerate ? 0 : k; kp <= k; ++kp) {
            while (true) {
                if (res.stats.refinements >= options_.refinement_cap) {
                    res.status = Status::ResourceLimit;
                    return res;
                }
                if (past(deadline)) {
                    res.status = Status::Timeout;
                    return res;
                }
                if (deadline)
                    s_.set_deadline(*deadline);
                auto t0 = Clock::now();
                Result r = s_.solve({ladder_.assume_at_most(s_, kp)});
                res.stats.candidate_solves++;
                res.stats.candidate_ms += ms_since(t0);
                if (r == Result::Interrupted) {
                    res.status = Status::Timeout;
                    return res;
                }
                if (r == Result::Unsat)
                    break;

                PartialAssignment p = enc::decode_perturbation(s_, spec_);
                check_witness(p);
                BooleanNetwork g = f_.perturbed(p);
                bool timed_out = false;
                t0 = Clock::now();
                std::optional<Configuration> ce =
                    find_ce(g, m_, &res.stats, deadline, &timed_out);
                res.stats.ce_ms += ms_since(t0);
                if (timed_out) {
                    res.status = Status::Timeout;
                    return res;
                }
                if (!ce) {
                    // verified: no minimal trap space of f/p escapes m
                    res.solutions.push_back(p);
                    if (!enumerate) {
                        res.status = Status::Sat;
                        return res;
                    }
                    block_supersets(p);
                    continue;
                }
                res.stats.counter_examples++;
                res.stats.ce_log.push_back(*ce);
                res.stats.rejected_log.push_back(p);
                refine(*ce);
                res.stats.refinements++;
            }
        }
        res.status = res.solutions.empty() ? Status::Unsat : Status::Sat;
        return res;
    }

private:
    // The candidate model carries a witness w with TS_{f/p}(w) |= m by
    // construction; re-check concretely to catch encoding regressions.
    void check_witness(const PartialAssignment& p) {
        Configuration w = enc::decode_config(s_, witness_);
        Subcube t = ts_of(f_.perturbed(p), w);
        if (!matches(t, m_))
            throw std::logic_error(
                "candidate witness fails concrete saturation check");
    }

    void block_supersets(const PartialAssignment& p) {
        std::vector<Lit> clause;
        for (const auto& [i, v] : p) {
            clause.push_back(sat::neg_lit(spec_.clamped[i]));
            clause.push_back(sat::lit_eq(spec_.value[i], !v));
        }
        s_.add_clause(std::move(clause));
    }

    void refine(const Configuration& ce) {
        if (options_.variant == RefinementVariant::V0) {
            std::vector<Lit> clause;
            for (int i = 0; i < f_.size(); ++i) {
                Var c = spec_.clamped[i];
                if (c == enc::kNoVar)
                    continue;
                if (s_.model_value(c)) {
                    clause.push_back(sat::neg_lit(c));
                    clause.push_back(sat::lit_eq(spec_.value[i],
                                                 !s_.model_value(spec_.value[i])));
                } else {
                    clause.push_back(sat::pos_lit(c));
                }
            }
            s_.add_clause(std::move(clause));
            return;
        }
        // The counter-example's trap space under the symbolic candidate
        // must strictly contain another trap space (which must match the
        // marker in the full variant).
        std::vector<Var> xin;
        for (int i = 0; i < f_.size(); ++i) {
            xin.push_back(s_.new_var());
            s_.add_clause(sat::lit_eq(xin.back(), ce[i]));
        }
        TsCircuit cx = enc::encode_ts_circuit(s_, FunctionSpec{spec_}, xin);
        std::vector<Var> yin;
        for (int i = 0; i < f_.size(); ++i)
            yin.push_back(s_.new_var());
        TsCircuit cy = enc::encode_ts_circuit(s_, FunctionSpec{spec_}, yin);
        enc::encode_strict_containment(s_, cx, cy);
        if (options_.variant == RefinementVariant::V2)
            enc::encode_marker_on_cube(s_, cy, m_);
    }

    const BooleanNetwork& f_;
    const PartialAssignment& m_;
    Options options_;
    Solver s_;
    enc::PerturbSpec spec_;
    std::vector<Var> witness_;
    TsCircuit circuit_;
    enc::CardinalityLadder ladder_;
};

}  // namespace

const char* status_name(Status s) {
    switch (s) {
        case Status::Sat: return "sat";
        case Status::Unsat: return "unsat";
        case Status::Timeout: return "timeout";
        case Status::ResourceLimit: return "resource-limit";
    }
    return "unknown";
}

std::optional<Configuration> find_counter_example(const BooleanNetwork& g,
                                                  const PartialAssignment& m,
                                                  CegarStats* stats) {
    bool timed_out = false;
    return find_ce(g, m, stats, std::nullopt, &timed_out);
}

ReprogrammingResult solve_reprogramming(const BooleanNetwork& f,
                                        const PartialAssignment& m, int k,
                                        const Options& options) {
    if (!f.locally_monotone())
        throw std::invalid_argument("network is not locally monotone");
    if (k < 0 || k > f.size())
        throw std::invalid_argument("perturbation size bound out of range");
    ReprogrammingLoop loop(f, m, k, options);
    return loop.run(k, /*enumerate=*/false);
}

ReprogrammingResult enumerate_reprogramming(const BooleanNetwork& f,
                                            const PartialAssignment& m, int k,
                                            const Options& options) {
    if (!f.locally_monotone())
        throw std::invalid_argument("network is not locally monotone");
    if (k < 0 || k > f.size())
        throw std::invalid_argument("perturbation size bound out of range");
    ReprogrammingLoop loop(f, m, k, options);
    return loop.run(k, /*enumerate=*/true);
}

SynthesisResult solve_synthesis(const InfluenceGraph& g,
                                const std::vector<std::string>& names,
                                enc::SynthMode mode, int clause_budget,
                                const PartialAssignment& m,
                                const Options& options) {
    SynthesisResult res;
    Deadline deadline;
    if (options.timeout)
        deadline = Clock::now() + *options.timeout;

    Solver s;
    enc::SynthSpec spec = enc::make_synth_spec(s, g, mode, clause_budget);
    enc::encode_synth_structure(s, spec);
    std::vector<Var> witness;
    for (int i = 0; i < g.n; ++i)
        witness.push_back(s.new_var());
    TsCircuit circuit = enc::encode_ts_circuit(s, FunctionSpec{spec}, witness);
    enc::encode_marker_on_cube(s, circuit, m);

    while (true) {
        if (res.stats.refinements >= options.refinement_cap) {
            res.status = Status::ResourceLimit;
            return res;
        }
        if (past(deadline)) {
            res.status = Status::Timeout;
            return res;
        }
        if (deadline)
            s.set_deadline(*deadline);
        auto t0 = Clock::now();
        Result r = s.solve();
        res.stats.candidate_solves++;
        res.stats.candidate_ms += ms_since(t0);
        if (r == Result::Interrupted) {
            res.status = Status::Timeout;
            return res;
        }
        if (r == Result::Unsat) {
            res.status = Status::Unsat;
            return res;
        }

        BooleanNetwork bn = enc::decode_network(s, spec, names);
        Configuration w = enc::decode_config(s, witness);
        if (!matches(ts_of(bn, w), m))
            throw std::logic_error(
                "synthesis witness fails concrete saturation check");
        bool timed_out = false;
        t0 = Clock::now();
        std::optional<Configuration> ce =
            find_ce(bn, m, &res.stats, deadline, &timed_out);
        res.stats.ce_ms += ms_since(t0);
        if (timed_out) {
            res.status = Status::Timeout;
            return res;
        }
        if (!ce) {
            res.status = Status::Sat;
            res.witness = std::move(bn);
            return res;
        }
        res.stats.counter_examples++;
        res.stats.ce_log.push_back(*ce);

        if (options.variant == RefinementVariant::V0) {
            std::vector<Lit> clause;
            auto flip = [&](Var v) {
                if (v != enc::kNoVar)
                    clause.push_back(sat::lit_eq(v, !s.model_value(v)));
            };
            for (const auto& per_clause : spec.sel)
                for (const auto& slot : per_clause)
                    for (Var v : slot)
                        flip(v);
            for (Var v : spec.constant)
                flip(v);
            s.add_clause(std::move(clause));
        } else {
            std::vector<Var> xin;
            for (int i = 0; i < g.n; ++i) {
                xin.push_back(s.new_var());
                s.add_clause(sat::lit_eq(xin.back(), (*ce)[i]));
            }
            TsCircuit cx = enc::encode_ts_circuit(s, FunctionSpec{spec}, xin);
            std::vector<Var> yin;
            for (int i = 0; i < g.n; ++i)
                yin.push_back(s.new_var());
            TsCircuit cy = enc::encode_ts_circuit(s, FunctionSpec{spec}, yin);
            enc::encode_strict_containment(s, cx, cy);
            if (options.variant == RefinementVariant::V2)
                enc::encode_marker_on_cube(s, cy, m);
        }
        res.stats.refinements++;
    }
}

}  // namespace mts::cegar
