#pragma once

#include <set>
#include <string>
#include <vector>

#include "mts/bn.hpp"

namespace mts::qbf {

/// A 3-block quantified CNF: exists (clamp/value) - forall (x) - exists
/// (circuit rails, witness, diff, cardinality counters). Literals use
/// 1-based DIMACS numbering.
struct QbfModel {
    int n = 0;
    int num_vars = 0;
    /// Everything except the cardinality counters; for a fully
    /// controllable instance this is 2n + n + 2n(n+1) + n + 2n(n+1) + 2n.
    int non_cardinality_vars = 0;
    std::vector<int> exists_outer;
    std::vector<int> forall_vars;  // one per component, in index order
    std::vector<int> exists_inner;
    std::vector<std::vector<int>> clauses;
    std::vector<std::string> header;  // comment lines, without the "c "
};

struct ExportOptions {
    std::set<int> uncontrollable;
    bool forbid_marker_nodes = false;
};

/// The monolithic reprogramming formula: some perturbation of at most k
/// controllable components such that, for every configuration x, either
/// x matches m or a witness y inside the trap space of x reaches a
/// strictly smaller trap space (so x lies in no minimal trap space).
/// Circuit layers are encoded without auxiliary variables by clause
/// distribution, so the variable budget is exact.
QbfModel build_reprogramming_qbf(const BooleanNetwork& f,
                                 const PartialAssignment& m, int k,
                                 const ExportOptions& options = {});

std::string to_text(const QbfModel& q);

struct ParsedQdimacs {
    int num_vars = 0;
    int num_clauses = 0;
    /// (quantifier, variables) per prefix line, 'a' or 'e'.
    std::vector<std::pair<char, std::vector<int>>> prefix;
    std::vector<std::vector<int>> clauses;
};

/// Strict parse; throws std::runtime_error on malformed input, on
/// header/body count mismatch, or when a variable appears in more than
/// one quantifier block.
ParsedQdimacs parse_qdimacs(const std::string& text);

/// Decides the formula by expanding the single forall block into 2^n
/// copies of the inner existential variables and running one SAT call
/// (guard: n <= 10).
bool expansion_satisfiable(const QbfModel& q);

}  // namespace mts::qbf
