#include "mts/sat/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace mts::sat {

namespace {

// Luby restart sequence, unit 1.
double luby(double y, int i) {
    int size, seq;
    for (size = 1, seq = 0; size < i + 1; seq++, size = 2 * size + 1) {
    }
    while (size - 1 != i) {
        size = (size - 1) >> 1;
        seq--;
        i = i % size;
    }
    return std::pow(y, seq);
}

constexpr int kRestartBase = 100;
constexpr double kVarDecay = 0.95;
constexpr float kClaDecay = 1.0f / 0.999f;

}  // namespace

Solver::Solver() = default;

Var Solver::new_var() {
    Var v = num_vars();
    assigns_.push_back(kUndef);
    polarity_.push_back(1);  // default phase: false
    level_.push_back(0);
    reason_.push_back(kNoReason);
    activity_.push_back(0.0);
    heap_pos_.push_back(-1);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    insert_order(v);
    return v;
}

Lit Solver::true_lit() {
    if (true_var_ < 0) {
        true_var_ = new_var();
        add_clause(pos_lit(true_var_));
    }
    return pos_lit(true_var_);
}

bool Solver::add_clause(std::vector<Lit> lits) {
    assert(decision_level() == 0);
    if (!ok_)
        return false;
    std::sort(lits.begin(), lits.end());
    std::vector<Lit> out;
    Lit prev;
    for (Lit l : lits) {
        assert(l.var() >= 0 && l.var() < num_vars());
        if (value(l) == kTrue || (!out.empty() && l == ~prev))
            return true;  // satisfied or tautological
        if (value(l) == kFalse || (!out.empty() && l == prev))
            continue;
        out.push_back(l);
        prev = l;
    }
    if (out.empty()) {
        ok_ = false;
        return false;
    }
    if (out.size() == 1) {
        unchecked_enqueue(out[0], kNoReason);
        ok_ = (propagate() == kNoReason);
        return ok_;
    }
    CRef cr = static_cast<CRef>(clauses_.size());
    clauses_.push_back(Clause{std::move(out), 0.0f, false, false});
    attach(cr);
    return true;
}

void Solver::attach(CRef cr) {
    const Clause& c = clauses_[cr];
    watches_[(~c.lits[0]).x].push_back({cr, c.lits[1]});
    watches_[(~c.lits[1]).x].push_back({cr, c.lits[0]});
}

void Solver::unchecked_enqueue(Lit l, CRef reason) {
    Var v = l.var();
    assert(value(v) == kUndef);
    assigns_[v] = l.sign() ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
}

Solver::CRef Solver::propagate() {
    CRef confl = kNoReason;
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        stats_.propagations++;
        std::vector<Watcher>& ws = watches_[p.x];
        size_t i = 0, j = 0;
        while (i < ws.size()) {
            Watcher w = ws[i];
            if (value(w.blocker) == kTrue) {
                ws[j++] = ws[i++];
                continue;
            }
            Clause& c = clauses_[w.cref];
            if (c.deleted) {
                ++i;
                continue;
            }
            // make sure the false watched literal is lits[1]
            Lit false_lit = ~p;
            if (c.lits[0] == false_lit)
                std::swap(c.lits[0], c.lits[1]);
            Lit first = c.lits[0];
            if (first != w.blocker && value(first) == kTrue) {
                ws[j++] = {w.cref, first};
                ++i;
                continue;
            }
            bool moved = false;
            for (size_t k = 2; k < c.lits.size(); ++k) {
                if (value(c.lits[k]) != kFalse) {
                    std::swap(c.lits[1], c.lits[k]);
                    watches_[(~c.lits[1]).x].push_back({w.cref, first});
                    moved = true;
                    break;
                }
            }
            if (moved) {
                ++i;
                continue;
            }
            // unit or conflict
            ws[j++] = {w.cref, first};
            ++i;
            if (value(first) == kFalse) {
                confl = w.cref;
                qhead_ = trail_.size();
                while (i < ws.size())
                    ws[j++] = ws[i++];
            } else {
                unchecked_enqueue(first, w.cref);
            }
        }
        ws.resize(j);
        if (confl != kNoReason)
            break;
    }
    return confl;
}

void Solver::cancel_until(int level) {
    if (decision_level() <= level)
        return;
    for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[level]; --i) {
        Var v = trail_[i].var();
        polarity_[v] = assigns_[v];  // phase saving
        assigns_[v] = kUndef;
        reason_[v] = kNoReason;
        if (heap_pos_[v] < 0)
            insert_order(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
}

void Solver::analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel) {
    int path_count = 0;
    Lit p;
    bool have_p = false;
    out_learnt.clear();
    out_learnt.push_back(Lit());  // slot for the asserting literal
    int index = static_cast<int>(trail_.size()) - 1;

    do {
        assert(confl != kNoReason);
        Clause& c = clauses_[confl];
        if (c.learnt)
            claus_bump(confl);
        for (size_t k = (have_p ? 1 : 0); k < c.lits.size(); ++k) {
            Lit q = c.lits[k];
            Var v = q.var();
            if (!seen_[v] && level_[v] > 0) {
                seen_[v] = 1;
                var_bump(v);
                if (level_[v] >= decision_level())
                    path_count++;
                else
                    out_learnt.push_back(q);
            }
        }
        while (!seen_[trail_[index].var()])
            --index;
        p = trail_[index];
        have_p = true;
        // reason clauses keep the propagated literal at lits[0], so the
        // next round starts scanning at index 1
        confl = reason_[p.var()];
        seen_[p.var()] = 0;
        path_count--;
        --index;
    } while (path_count > 0);
    out_learnt[0] = ~p;

    std::vector<Var> to_clear;
    to_clear.reserve(out_learnt.size());
    for (size_t i = 1; i < out_learnt.size(); ++i)
        to_clear.push_back(out_learnt[i].var());

    // basic minimization: drop literals whose reason is fully subsumed
    size_t jj = 1;
    for (size_t i = 1; i < out_learnt.size(); ++i) {
        Var v = out_learnt[i].var();
        CRef r = reason_[v];
        bool redundant = false;
        if (r != kNoReason) {
            redundant = true;
            const Clause& rc = clauses_[r];
            for (Lit q : rc.lits) {
                if (q.var() == v)
                    continue;
                if (!seen_[q.var()] && level_[q.var()] > 0) {
                    redundant = false;
                    break;
                }
            }
        }
        if (!redundant)
            out_learnt[jj++] = out_learnt[i];
    }
    out_learnt.resize(jj);

    if (out_learnt.size() == 1) {
        out_btlevel = 0;
    } else {
        size_t max_i = 1;
        for (size_t i = 2; i < out_learnt.size(); ++i)
            if (level_[out_learnt[i].var()] > level_[out_learnt[max_i].var()])
                max_i = i;
        std::swap(out_learnt[1], out_learnt[max_i]);
        out_btlevel = level_[out_learnt[1].var()];
    }

    seen_[out_learnt[0].var()] = 0;
    for (Var v : to_clear)
        seen_[v] = 0;
}

void Solver::var_bump(Var v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (double& a : activity_)
            a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0)
        heap_up(heap_pos_[v]);
}

void Solver::var_decay() { var_inc_ /= kVarDecay; }

void Solver::claus_bump(CRef cr) {
    Clause& c = clauses_[cr];
    c.act += cla_inc_;
    if (c.act > 1e20f) {
        for (CRef r : learnt_refs_)
            clauses_[r].act *= 1e-20f;
        cla_inc_ *= 1e-20f;
    }
}

void Solver::insert_order(Var v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_pos_[v]);
}

void Solver::heap_up(int i) {
    Var v = heap_[i];
    while (i > 0) {
        int p = (i - 1) >> 1;
        if (activity_[heap_[p]] >= activity_[v])
            break;
        heap_[i] = heap_[p];
        heap_pos_[heap_[i]] = i;
        i = p;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
}

void Solver::heap_down(int i) {
    Var v = heap_[i];
    int n = static_cast<int>(heap_.size());
    while (true) {
        int l = 2 * i + 1, r = l + 1, best = i;
        double bact = activity_[v];
        if (l < n && activity_[heap_[l]] > bact) {
            best = l;
            bact = activity_[heap_[l]];
        }
        if (r < n && activity_[heap_[r]] > bact)
            best = r;
        if (best == i)
            break;
        heap_[i] = heap_[best];
        heap_pos_[heap_[i]] = i;
        i = best;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
}

Var Solver::pop_order() {
    Var v = heap_[0];
    heap_pos_[v] = -1;
    heap_[0] = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_pos_[heap_[0]] = 0;
        heap_down(0);
    }
    return v;
}

Lit Solver::pick_branch_lit() {
    while (!heap_.empty()) {
        Var v = heap_[0];
        if (value(v) == kUndef) {
            pop_order();
            return Lit(v, polarity_[v] == kFalse);
        }
        pop_order();
    }
    return Lit();
}

bool Solver::locked(CRef cr) const {
    const Clause& c = clauses_[cr];
    Var v = c.lits[0].var();
    return reason_[v] == cr && value(c.lits[0]) == kTrue;
}

void Solver::reduce_db() {
    std::sort(learnt_refs_.begin(), learnt_refs_.end(), [this](CRef a, CRef b) {
        return clauses_[a].act < clauses_[b].act;
    });
    size_t keep_from = learnt_refs_.size() / 2;
    std::vector<CRef> kept;
    kept.reserve(learnt_refs_.size() - keep_from / 2);
    for (size_t i = 0; i < learnt_refs_.size(); ++i) {
        Clause& c = clauses_[learnt_refs_[i]];
        if (i < keep_from && c.lits.size() > 2 && !locked(learnt_refs_[i])) {
            c.deleted = true;
            c.lits.clear();
            c.lits.shrink_to_fit();
        } else {
            kept.push_back(learnt_refs_[i]);
        }
    }
    learnt_refs_ = std::move(kept);
    rebuild_watches();
}

void Solver::rebuild_watches() {
    for (auto& w : watches_)
        w.clear();
    for (CRef cr = 0; cr < clauses_.size(); ++cr) {
        if (!clauses_[cr].deleted)
            attach(cr);
    }
}

bool Solver::deadline_passed() const {
    return deadline_ && std::chrono::steady_clock::now() > *deadline_;
}

Result Solver::solve(const std::vector<Lit>& assumptions) {
    stats_.solves++;
    cancel_until(0);
    if (!ok_)
        return Result::Unsat;
    if (propagate() != kNoReason) {
        ok_ = false;
        return Result::Unsat;
    }

    if (max_learnts_ < 1000)
        max_learnts_ = std::max<double>(1000, clauses_.size() / 3.0);

    std::vector<Lit> learnt;
    int restart = 0;
    uint64_t conflict_budget =
        static_cast<uint64_t>(luby(2.0, restart) * kRestartBase);
    uint64_t conflicts_here = 0;

    while (true) {
        CRef confl = propagate();
        if (confl != kNoReason) {
            stats_.conflicts++;
            conflicts_here++;
            if (decision_level() == 0) {
                ok_ = false;
                return Result::Unsat;
            }
            int btlevel;
            analyze(confl, learnt, btlevel);
            cancel_until(btlevel);
            if (learnt.size() == 1) {
                unchecked_enqueue(learnt[0], kNoReason);
            } else {
                CRef cr = static_cast<CRef>(clauses_.size());
                clauses_.push_back(Clause{learnt, cla_inc_, true, false});
                learnt_refs_.push_back(cr);
                attach(cr);
                unchecked_enqueue(learnt[0], cr);
            }
            var_decay();
            cla_inc_ *= kClaDecay;
            if ((stats_.conflicts & 1023) == 0 && deadline_passed()) {
                cancel_until(0);
                return Result::Interrupted;
            }
        } else {
            if (conflicts_here >= conflict_budget) {
                // restart
                cancel_until(0);
                restart++;
                conflict_budget =
                    static_cast<uint64_t>(luby(2.0, restart) * kRestartBase);
                conflicts_here = 0;
                if (deadline_passed())
                    return Result::Interrupted;
                continue;
            }
            if (static_cast<double>(learnt_refs_.size()) >= max_learnts_) {
                int lvl = decision_level();
                cancel_until(0);
                reduce_db();
                max_learnts_ *= 1.2;
                (void)lvl;
                continue;
            }
            // assumptions come first, one pseudo-decision level each
            Lit next;
            bool have_next = false;
            while (decision_level() < static_cast<int>(assumptions.size())) {
                Lit p = assumptions[decision_level()];
                if (value(p) == kTrue) {
                    new_decision_level();
                } else if (value(p) == kFalse) {
                    cancel_until(0);
                    return Result::Unsat;
                } else {
                    next = p;
                    have_next = true;
                    break;
                }
            }
            if (!have_next) {
                next = pick_branch_lit();
                if (next.x < 0) {
                    // model found
                    model_.assign(num_vars(), 0);
                    for (Var v = 0; v < num_vars(); ++v)
                        model_[v] = (value(v) == kTrue);
                    cancel_until(0);
                    return Result::Sat;
                }
                stats_.decisions++;
            }
            new_decision_level();
            unchecked_enqueue(next, kNoReason);
        }
    }
}

std::optional<std::vector<Lit>> Solver::propagate_only(
    const std::vector<Lit>& assumptions) {
    cancel_until(0);
    if (!ok_ || propagate() != kNoReason)
        return std::nullopt;
    bool conflict = false;
    for (Lit p : assumptions) {
        if (value(p) == kTrue)
            continue;
        if (value(p) == kFalse) {
            conflict = true;
            break;
        }
        new_decision_level();
        unchecked_enqueue(p, kNoReason);
        if (propagate() != kNoReason) {
            conflict = true;
            break;
        }
    }
    std::optional<std::vector<Lit>> out;
    if (!conflict)
        out = trail_;
    cancel_until(0);
    return out;
}

}  // namespace mts::sat
