#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mts/bn.hpp"
#include "mts/sat/encoding.hpp"
#include "mts/subcube.hpp"

namespace mts::cegar {

/// How a counter-example x̂ restricts future candidates.
///   V0: block only the exact rejected candidate assignment.
///   V1: require a trap space strictly inside TS(x̂) under the candidate.
///   V2: as V1, and the smaller trap space must match the marker (default).
enum class RefinementVariant { V0, V1, V2 };

struct Options {
    RefinementVariant variant = RefinementVariant::V2;
    std::set<int> uncontrollable;
    bool forbid_marker_nodes = false;
    std::optional<std::chrono::milliseconds> timeout;
    /// Each refinement adds two trap-space circuits to the candidate
    /// formula; the cap turns runaway growth into an explicit status.
    int refinement_cap = 10000;
};

struct CegarStats {
    int counter_examples = 0;
    int refinements = 0;
    uint64_t candidate_solves = 0;
    uint64_t ce_solves = 0;
    double candidate_ms = 0.0;
    double ce_ms = 0.0;

    std::vector<Configuration> ce_log;
    /// Reprogramming only: the candidate rejected by ce_log[i].
    std::vector<PartialAssignment> rejected_log;
};

enum class Status { Sat, Unsat, Timeout, ResourceLimit };

const char* status_name(Status s);

struct ReprogrammingResult {
    Status status = Status::Unsat;
    /// At most one entry for a first-solution query; the full
    /// subset-minimal set for enumeration. On Timeout/ResourceLimit the
    /// list is a lower bound of the true solution set.
    std::vector<PartialAssignment> solutions;
    CegarStats stats;
};

struct SynthesisResult {
    Status status = Status::Unsat;
    std::optional<BooleanNetwork> witness;
    CegarStats stats;
};

/// A configuration outside the marker that lies in a minimal trap space
/// of the concrete network g, or nullopt when every minimal trap space
/// matches m (i.e. g needs no further perturbation). Decomposed search:
/// SAT-pick a marker-violating x, saturate concretely, one SAT
/// minimality query; non-minimal trap spaces are blocked as whole
/// final-layer images, which never excludes a configuration inside a
/// minimal trap space.
std::optional<Configuration> find_counter_example(const BooleanNetwork& g,
                                                  const PartialAssignment& m,
                                                  CegarStats* stats = nullptr);

/// First perturbation P with |P| <= k whose application makes every
/// minimal trap space match m. Candidates are drawn from a formula that
/// already demands a witness configuration whose trap space matches m,
/// then checked against find_counter_example; counter-examples refine
/// the formula per the chosen variant. Every reported P is concretely
/// re-verified.
ReprogrammingResult solve_reprogramming(const BooleanNetwork& f,
                                        const PartialAssignment& m, int k,
                                        const Options& options = {});

/// All subset-minimal solutions with |P| <= k, by increasing candidate
/// size; found solutions are blocked together with every superset, and
/// refinements persist across sizes.
ReprogrammingResult enumerate_reprogramming(const BooleanNetwork& f,
                                            const PartialAssignment& m, int k,
                                            const Options& options = {});

/// A network over the signed influence graph g (exact: every edge
/// appears; subset: only g-edges may appear) whose minimal trap spaces
/// all match m. UNSAT is relative to the DNF domain with the given
/// clause budget.
SynthesisResult solve_synthesis(const InfluenceGraph& g,
                                const std::vector<std::string>& names,
                                enc::SynthMode mode, int clause_budget,
                                const PartialAssignment& m,
                                const Options& options = {});

}  // namespace mts::cegar
