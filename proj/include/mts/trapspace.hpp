#pragma once

#include <optional>
#include <vector>

#include "mts/bn.hpp"
#include "mts/subcube.hpp"

namespace mts::sat {
class Solver;
}

namespace mts {

/// True iff some vertex z of h has f_i(z) = b. Computed by rail
/// substitution on the unate DNF: for b=1 some clause must have every
/// literal compatible with h; for b=0 every clause must have some literal
/// falsifiable in h (for unate functions the per-variable extreme point
/// falsifies all clauses simultaneously).
bool can_output(const BooleanNetwork& f, int i, const Subcube& h, bool b);

bool is_trap_space(const BooleanNetwork& f, const Subcube& h);

/// Smallest trap space containing x, by rail saturation: sweep components
/// in ascending index, freeing any fixed dimension whose opposite value is
/// reachable, until a full sweep changes nothing. Converges within n
/// sweeps. `trace`, when given, receives the cube after each changing
/// sweep.
Subcube ts_of(const BooleanNetwork& f, const Configuration& x,
              std::vector<Subcube>* trace = nullptr);

/// Minimality of a TS-saturated trap space h: no vertex y of h has
/// ts_of(f, y) strictly inside h. Without an engine a brute-force pass
/// over c(h) is used (dimension must be <= 12); with an engine a single
/// SAT query on the encoded circuit decides it. `witness` receives a
/// strictly-descending vertex when h is not minimal.
bool is_minimal(const BooleanNetwork& f, const Subcube& h,
                sat::Solver* engine = nullptr,
                Configuration* witness = nullptr);

/// x lies in some minimal trap space iff ts_of(f, x) is minimal.
bool in_mts(const BooleanNetwork& f, const Configuration& x,
            sat::Solver* engine = nullptr);

/// Iterates the strict-descent witness until a minimal trap space inside
/// ts_of(f, x) is reached.
Subcube descend_to_mts(const BooleanNetwork& f, const Configuration& x,
                       bool use_engine = false);

/// Best-effort enumeration of distinct minimal trap spaces: SAT-search a
/// configuration outside every found cube, descend, repeat. `limit` caps
/// the output size (0 = unlimited).
std::vector<Subcube> enumerate_mts(const BooleanNetwork& f, size_t limit = 0);

}  // namespace mts
