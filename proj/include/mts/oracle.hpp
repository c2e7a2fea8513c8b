#pragma once

#include <optional>
#include <set>
#include <vector>

#include "mts/bn.hpp"
#include "mts/sat/encoding.hpp"
#include "mts/subcube.hpp"

namespace mts::oracle {

/// Deliberately naive ground truth for small instances. All results are
/// computed definitionally (trap-space intersection, exhaustive candidate
/// enumeration), independent of the saturation and SAT paths. Dimension
/// guards throw instead of degrading.
///
/// The enumeration kernels exist twice: a plain serial reference and an
/// OpenMP-parallel version used by default. `bench_oracle` compares them.

/// All minimal trap spaces, via intersection of closed subcubes.
std::vector<Subcube> brute_mts(const BooleanNetwork& f);
std::vector<Subcube> brute_mts_serial(const BooleanNetwork& f);

/// Smallest trap space containing x: intersection of every closed subcube
/// containing x.
Subcube brute_ts(const BooleanNetwork& f, const Configuration& x);

/// True iff every minimal trap space of f matches m.
bool all_mts_match(const BooleanNetwork& f, const PartialAssignment& m);

struct ReprogrammingOptions {
    std::set<int> uncontrollable;
    bool forbid_marker_nodes = false;
};

/// Exhaustive subset-minimal reprogramming over the restricted candidate
/// space of perturbations with at most k entries.
std::vector<PartialAssignment> brute_reprogramming(
    const BooleanNetwork& f, const PartialAssignment& m, int k,
    const ReprogrammingOptions& options = {});
std::vector<PartialAssignment> brute_reprogramming_serial(
    const BooleanNetwork& f, const PartialAssignment& m, int k,
    const ReprogrammingOptions& options = {});

struct SynthesisVerdict {
    bool sat = false;
    std::optional<BooleanNetwork> witness;
};

/// Exhaustive synthesis over the DNF domain of the graph with the given
/// clause budget (tiny guards: n <= 3, budget <= 2, in-degree <= 3).
SynthesisVerdict brute_synthesis(const InfluenceGraph& g, enc::SynthMode mode,
                                 int clause_budget, const PartialAssignment& m,
                                 const std::vector<std::string>& names);

}  // namespace mts::oracle
