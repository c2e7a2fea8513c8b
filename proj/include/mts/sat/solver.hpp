#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace mts::sat {

using Var = int32_t;

struct Lit {
    int32_t x = -2;

    Lit() = default;
    Lit(Var v, bool negated) : x(v * 2 + (negated ? 1 : 0)) {}

    Var var() const { return x >> 1; }
    bool sign() const { return x & 1; }
    Lit operator~() const {
        Lit l;
        l.x = x ^ 1;
        return l;
    }
    bool operator==(const Lit&) const = default;
    bool operator<(const Lit& o) const { return x < o.x; }
};

inline Lit pos_lit(Var v) { return Lit(v, false); }
inline Lit neg_lit(Var v) { return Lit(v, true); }
/// Literal forcing variable v to Boolean b.
inline Lit lit_eq(Var v, bool b) { return Lit(v, !b); }

enum class Result { Sat, Unsat, Interrupted };

/// Incremental CDCL solver: two-watched-literal propagation, 1UIP clause
/// learning, VSIDS branching with phase saving, Luby restarts and
/// activity-based learnt-clause reduction. Clauses persist across solve
/// calls; assumptions are per-call.
class Solver {
public:
    Solver();

    Var new_var();
    int num_vars() const { return static_cast<int>(assigns_.size()); }

    /// Returns false once the formula is unsatisfiable at level 0.
    bool add_clause(std::vector<Lit> lits);
    bool add_clause(Lit a) { return add_clause(std::vector<Lit>{a}); }
    bool add_clause(Lit a, Lit b) { return add_clause(std::vector<Lit>{a, b}); }
    bool add_clause(Lit a, Lit b, Lit c) {
        return add_clause(std::vector<Lit>{a, b, c});
    }

    Result solve(const std::vector<Lit>& assumptions = {});
    bool model_value(Var v) const { return model_[v]; }

    /// Asserts the assumptions one by one and runs unit propagation only
    /// (zero decisions). Returns every literal fixed by propagation, or
    /// nullopt on conflict. Leaves the solver at level 0.
    std::optional<std::vector<Lit>> propagate_only(
        const std::vector<Lit>& assumptions);

    /// A literal constrained to be true (allocated on first use).
    Lit true_lit();

    void set_deadline(std::chrono::steady_clock::time_point t) { deadline_ = t; }
    void clear_deadline() { deadline_.reset(); }

    bool okay() const { return ok_; }

    struct Stats {
        uint64_t decisions = 0;
        uint64_t propagations = 0;
        uint64_t conflicts = 0;
        uint64_t solves = 0;
    };
    const Stats& stats() const { return stats_; }

private:
    using CRef = uint32_t;
    static constexpr CRef kNoReason = UINT32_MAX;
    static constexpr uint8_t kTrue = 0, kFalse = 1, kUndef = 2;

    struct Clause {
        std::vector<Lit> lits;
        float act = 0.0f;
        bool learnt = false;
        bool deleted = false;
    };
    struct Watcher {
        CRef cref;
        Lit blocker;
    };

    uint8_t value(Var v) const { return assigns_[v]; }
    uint8_t value(Lit l) const {
        uint8_t a = assigns_[l.var()];
        return a == kUndef ? kUndef : static_cast<uint8_t>(a ^ l.sign());
    }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    void new_decision_level() { trail_lim_.push_back(static_cast<int>(trail_.size())); }
    void unchecked_enqueue(Lit l, CRef reason);
    CRef propagate();
    void cancel_until(int level);
    void analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel);
    Lit pick_branch_lit();
    void attach(CRef cr);
    void reduce_db();
    void rebuild_watches();
    bool locked(CRef cr) const;

    void var_bump(Var v);
    void var_decay();
    void claus_bump(CRef cr);
    void insert_order(Var v);
    Var pop_order();
    void heap_up(int i);
    void heap_down(int i);
    bool deadline_passed() const;

    bool ok_ = true;
    std::vector<Clause> clauses_;
    std::vector<CRef> learnt_refs_;
    std::vector<std::vector<Watcher>> watches_;
    std::vector<uint8_t> assigns_;
    std::vector<uint8_t> polarity_;
    std::vector<int32_t> level_;
    std::vector<CRef> reason_;
    std::vector<Lit> trail_;
    std::vector<int32_t> trail_lim_;
    size_t qhead_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    float cla_inc_ = 1.0f;
    std::vector<int32_t> heap_;      // binary max-heap of vars
    std::vector<int32_t> heap_pos_;  // -1 when not in heap
    std::vector<uint8_t> seen_;

    std::vector<uint8_t> model_;
    double max_learnts_ = 0;

    Var true_var_ = -1;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    Stats stats_;
};

}  // namespace mts::sat
