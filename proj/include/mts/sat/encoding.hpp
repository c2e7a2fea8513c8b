#pragma once

#include <set>
#include <variant>
#include <vector>

#include "mts/bn.hpp"
#include "mts/sat/solver.hpp"
#include "mts/subcube.hpp"

namespace mts::enc {

using sat::Lit;
using sat::Solver;
using sat::Var;

constexpr Var kNoVar = -1;

/// Local functions taken verbatim from a network.
struct ConcreteSpec {
    const BooleanNetwork* bn = nullptr;
};

/// Local functions with symbolic clamps: component i may be frozen to
/// value_i when clamped_i holds. Clamp variables exist only for
/// controllable components (kNoVar otherwise).
struct PerturbSpec {
    const BooleanNetwork* bn = nullptr;
    std::vector<Var> clamped;
    std::vector<Var> value;
};

enum class SynthMode { Exact, Subset };

/// Local functions as selector-parameterized DNFs over a signed influence
/// graph: sel[i][c][e] picks regulator e of component i into clause slot
/// c; the literal sign is fixed by the edge sign. Components without
/// regulators carry a free constant variable instead.
struct SynthSpec {
    int n = 0;
    SynthMode mode = SynthMode::Exact;
    int clause_budget = 32;
    // regulators[i]: (source component, positive sign)
    std::vector<std::vector<std::pair<int, bool>>> regulators;
    std::vector<std::vector<std::vector<Var>>> sel;   // [i][c][e]
    std::vector<std::vector<Var>> used;               // [i][c]
    std::vector<Var> constant;                        // kNoVar when regulated
};

using FunctionSpec = std::variant<ConcreteSpec, PerturbSpec, SynthSpec>;

/// Allocates clamp/value variables for every controllable component.
PerturbSpec make_perturb_spec(Solver& s, const BooleanNetwork& bn,
                              const std::set<int>& controllable);

/// Allocates selector/used/constant variables for the graph; call
/// encode_synth_structure afterwards to constrain them.
SynthSpec make_synth_spec(Solver& s, const InfluenceGraph& g, SynthMode mode,
                          int clause_budget);

/// Structural constraints on a SynthSpec: used-clause definitions, prefix
/// activation, no-constant rule for regulated components, per-edge
/// coverage in exact mode, and lexicographic symmetry breaking between
/// adjacent clause slots.
void encode_synth_structure(Solver& s, const SynthSpec& spec);

/// One rail layer of a trap-space circuit.
struct Rails {
    std::vector<Var> one;
    std::vector<Var> zero;
};

/// The (n+1)-layer saturation circuit: layer 0 ties the rails to the
/// input configuration, layer t+1 extends layer t by everything the local
/// functions (and clamps, if any) can output.
struct TsCircuit {
    int n = 0;
    std::vector<Var> input;
    std::vector<Rails> layers;  // n + 1

    const Rails& last() const { return layers.back(); }
};

/// Defined literal that is true iff some vertex of the layer cube gets
/// local value `target` from component i's function.
Lit encode_fun_eval(Solver& s, const FunctionSpec& spec, int i,
                    const Rails& layer, bool target);

TsCircuit encode_ts_circuit(Solver& s, const FunctionSpec& spec,
                            std::vector<Var> input);

/// Unit clauses pinning every marked dimension of the final layer.
void encode_marker_on_cube(Solver& s, const TsCircuit& circuit,
                           const PartialAssignment& m);

/// c(inner) strictly inside c(outer): pointwise rail containment plus a
/// diff disjunction over the final layers.
void encode_strict_containment(Solver& s, const TsCircuit& outer,
                               const TsCircuit& inner);

/// Sequential-counter cardinality ladder over a fixed variable set, built
/// once up to k_max; per-bound activation literals allow the bound to grow
/// across solve calls without re-encoding.
class CardinalityLadder {
public:
    CardinalityLadder() = default;
    CardinalityLadder(Solver& s, std::vector<Var> vars, int k_max);

    /// Assumption literal enforcing at most k of the variables true.
    Lit assume_at_most(Solver& s, int k);

private:
    std::vector<Var> vars_;
    int k_max_ = 0;
    // count_ge_[i][j]: at least j+1 of the first i+1 vars are true
    std::vector<std::vector<Var>> count_ge_;
    std::vector<Var> activation_;  // per bound k, kNoVar until requested
};

/// Model decoding helpers. Every decoded object should be re-verified
/// concretely by the caller.
Subcube decode_cube(const Solver& s, const Rails& layer);
Configuration decode_config(const Solver& s, const std::vector<Var>& input);
PartialAssignment decode_perturbation(const Solver& s, const PerturbSpec& spec);
BooleanNetwork decode_network(const Solver& s, const SynthSpec& spec,
                              const std::vector<std::string>& names);

}  // namespace mts::enc
