#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mts {

/// A full Boolean state of the network, one bit per component.
using Configuration = std::vector<uint8_t>;

/// Partial map component index -> Boolean. Serves both as marker M and
/// as perturbation P.
using PartialAssignment = std::map<int, bool>;

struct DnfLiteral {
    int var = -1;
    bool positive = true;

    bool operator==(const DnfLiteral&) const = default;
    auto operator<=>(const DnfLiteral&) const = default;
};

/// One clause of a DNF: a conjunction of literals, kept sorted by variable.
using DnfClause = std::vector<DnfLiteral>;

/// Unate disjunctive normal form. Every variable occurs with a single sign
/// across the whole formula. An empty clause list denotes the constant
/// function stored in `constant`.
struct UnateDnf {
    std::vector<DnfClause> clauses;
    std::optional<bool> constant;

    bool is_constant() const { return clauses.empty(); }
    bool eval(const Configuration& x) const;

    static UnateDnf make_constant(bool b) { return UnateDnf{{}, b}; }

    /// Drops duplicate literals and subsumed clauses. Assumes unateness.
    void normalize();

    bool operator==(const UnateDnf& o) const {
        return clauses == o.clauses && constant == o.constant;
    }
};

struct InfluenceGraph {
    int n = 0;
    std::set<std::pair<int, int>> pos_edges;  // (source, target)
    std::set<std::pair<int, int>> neg_edges;

    bool locally_monotone() const;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error("line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + msg),
          line(line), col(col) {}
    int line;
    int col;
};

/// A Boolean network of dimension n: one named component per index, each
/// with a unate DNF local function (or a constant).
class BooleanNetwork {
public:
    BooleanNetwork() = default;
    BooleanNetwork(std::vector<std::string> names, std::vector<UnateDnf> functions);

    int size() const { return static_cast<int>(functions_.size()); }
    const std::string& name(int i) const { return names_[i]; }
    const std::vector<std::string>& names() const { return names_; }
    /// -1 when no component carries this name.
    int index_of(const std::string& name) const;
    const UnateDnf& function(int i) const { return functions_[i]; }

    bool eval_local(int i, const Configuration& x) const {
        return functions_[i].eval(x);
    }
    Configuration image(const Configuration& x) const;

    /// Syntactic influence graph of the normalized DNFs. For irredundant
    /// unate DNFs this coincides with the semantic witness definition.
    InfluenceGraph influence_graph() const;
    bool locally_monotone() const;

    /// f/P: components in dom(P) become constants, the rest is unchanged.
    BooleanNetwork perturbed(const PartialAssignment& p) const;

    /// Parses the bnet text format: lines of `name, expression` over
    /// `&`, `|`, `!`, parentheses and the constants `0`/`1`.
    /// Rejects networks that are not locally monotone.
    static BooleanNetwork parse_bnet(const std::string& text);
    std::string to_bnet() const;

    bool operator==(const BooleanNetwork& o) const {
        return names_ == o.names_ && functions_ == o.functions_;
    }

private:
    std::vector<std::string> names_;
    std::vector<UnateDnf> functions_;
    std::map<std::string, int> index_;
};

bool matches(const Configuration& x, const PartialAssignment& m);

/// Restriction/union law used when stacking perturbations:
/// (f/P)/Q == f/(Q ∪ P\dom(Q)).
PartialAssignment override_assignment(const PartialAssignment& p,
                                      const PartialAssignment& q);

}  // namespace mts
