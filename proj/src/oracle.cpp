#include "mts/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mts::oracle {

namespace {

constexpr int kMaxMtsDim = 12;
constexpr int kMaxTsDim = 10;
constexpr int kMaxReprogDim = 10;
constexpr int kMaxReprogK = 3;

[[noreturn]] void scale_exceeded(const char* what) {
    throw std::runtime_error(std::string("oracle scale exceeded: ") + what);
}

// Subcube in {0,1,*}^n for n <= 16, as a pair of rail masks.
struct SmallCube {
    uint32_t one = 0;
    uint32_t zero = 0;

    bool operator==(const SmallCube&) const = default;
    bool contains_config(uint32_t x, uint32_t full) const {
        return (x & ~one) == 0 && (~x & full & ~zero) == 0;
    }
    bool contains_cube(const SmallCube& o) const {
        return (o.one & ~one) == 0 && (o.zero & ~zero) == 0;
    }
};

Subcube to_subcube(const SmallCube& c, int n) {
    Subcube h(n);
    for (int i = 0; i < n; ++i) {
        if ((c.one >> i) & 1)
            h.set_one(i);
        if ((c.zero >> i) & 1)
            h.set_zero(i);
    }
    return h;
}

// Per-component truth tables as bitsets over the 2^n configurations.
struct TruthTables {
    int n;
    size_t words;
    std::vector<std::vector<uint64_t>> t;  // [i][word]

    explicit TruthTables(const BooleanNetwork& f)
        : n(f.size()), words(((size_t(1) << n) + 63) / 64), t(n) {
        Configuration x(n);
        for (int i = 0; i < n; ++i)
            t[i].assign(words, 0);
        for (uint32_t cfg = 0; cfg < (uint32_t(1) << n); ++cfg) {
            for (int i = 0; i < n; ++i)
                x[i] = (cfg >> i) & 1;
            for (int i = 0; i < n; ++i)
                if (f.eval_local(i, x))
                    t[i][cfg >> 6] |= uint64_t(1) << (cfg & 63);
        }
    }

    void clamp(int i, bool b) {
        std::fill(t[i].begin(), t[i].end(), b ? ~uint64_t(0) : 0);
    }
};

// All closed subcubes: h is closed iff for every fixed dimension i the
// whole vertex set maps inside (no vertex can output the opposite value).
void collect_closed_rec(const TruthTables& tt, int dim, SmallCube cur,
                        std::vector<uint64_t>& mask,
                        std::vector<SmallCube>& out) {
    if (dim == tt.n) {
        for (int i = 0; i < tt.n; ++i) {
            bool has1 = (cur.one >> i) & 1;
            bool has0 = (cur.zero >> i) & 1;
            if (has1 && has0)
                continue;
            for (size_t w = 0; w < tt.words; ++w) {
                uint64_t escape = has1 ? (mask[w] & ~tt.t[i][w])
                                       : (mask[w] & tt.t[i][w]);
                if (escape)
                    return;
            }
        }
        out.push_back(cur);
        return;
    }
    std::vector<uint64_t> saved = mask;
    auto restrict_to = [&](bool value) {
        for (size_t w = 0; w < tt.words; ++w) {
            uint64_t dim_bits;
            if (dim < 6) {
                uint64_t block = (uint64_t(1) << (1 << dim)) - 1;
                dim_bits = 0;
                for (int b = 0; b < 64; b += 2 << dim)
                    dim_bits |= block << (b + (1 << dim));
            } else {
                dim_bits = ((w >> (dim - 6)) & 1) ? ~uint64_t(0) : 0;
            }
            mask[w] = saved[w] & (value ? dim_bits : ~dim_bits);
        }
    };

    SmallCube c = cur;
    c.one = cur.one | (1u << dim);
    c.zero = cur.zero & ~(1u << dim);
    restrict_to(true);
    collect_closed_rec(tt, dim + 1, c, mask, out);

    c.one = cur.one & ~(1u << dim);
    c.zero = cur.zero | (1u << dim);
    restrict_to(false);
    collect_closed_rec(tt, dim + 1, c, mask, out);

    c.one = cur.one | (1u << dim);
    c.zero = cur.zero | (1u << dim);
    mask = saved;
    collect_closed_rec(tt, dim + 1, c, mask, out);
}

std::vector<SmallCube> collect_closed(const TruthTables& tt) {
    std::vector<SmallCube> out;
    std::vector<uint64_t> mask(tt.words, ~uint64_t(0));
    if (tt.n < 6)
        mask[0] = (uint64_t(1) << (uint64_t(1) << tt.n)) - 1;
    collect_closed_rec(tt, 0, SmallCube{}, mask, out);
    return out;
}

// Smallest trap space containing cfg, by intersecting every closed
// subcube containing it.
SmallCube ts_by_intersection(const std::vector<SmallCube>& closed,
                             uint32_t cfg, uint32_t full) {
    SmallCube r{full, full};
    for (const SmallCube& c : closed) {
        if (c.contains_config(cfg, full)) {
            r.one &= c.one;
            r.zero &= c.zero;
        }
    }
    return r;
}

struct MtsAnalysis {
    std::vector<SmallCube> ts;   // per configuration
    std::vector<SmallCube> mts;  // deduplicated minimal cubes
};

// TS of every configuration plus the set of minimal trap spaces: a cube
// T = TS(x) is minimal iff TS(y) = T for every vertex y of T.
MtsAnalysis analyze(const TruthTables& tt, bool parallel) {
    const std::vector<SmallCube> closed = collect_closed(tt);
    uint32_t count = uint32_t(1) << tt.n;
    uint32_t full = count - 1;
    MtsAnalysis a;
    a.ts.resize(count);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && tt.n >= 6)
#endif
    for (int64_t cfg = 0; cfg < int64_t(count); ++cfg)
        a.ts[cfg] = ts_by_intersection(closed, uint32_t(cfg), full);
    (void)parallel;

    for (uint32_t cfg = 0; cfg < count; ++cfg) {
        const SmallCube& t = a.ts[cfg];
        if (std::find(a.mts.begin(), a.mts.end(), t) != a.mts.end())
            continue;
        bool minimal = true;
        uint32_t free_bits = t.one & t.zero & full;
        uint32_t base = t.one & ~free_bits;
        // iterate vertices of t
        uint32_t sub = 0;
        do {
            uint32_t y = base | sub;
            if (!(a.ts[y] == t)) {
                minimal = false;
                break;
            }
            sub = (sub - free_bits) & free_bits;
        } while (sub != 0);
        if (minimal)
            a.mts.push_back(t);
    }
    return a;
}

std::vector<Subcube> mts_impl(const BooleanNetwork& f, bool parallel) {
    if (f.size() > kMaxMtsDim)
        scale_exceeded("brute_mts dimension");
    TruthTables tt(f);
    MtsAnalysis a = analyze(tt, parallel);
    std::vector<Subcube> out;
    for (const SmallCube& c : a.mts)
        out.push_back(to_subcube(c, f.size()));
    std::sort(out.begin(), out.end());
    return out;
}

bool all_mts_match_tables(const TruthTables& tt, const PartialAssignment& m) {
    uint32_t count = uint32_t(1) << tt.n;
    uint32_t full = count - 1;
    // cheap pre-check: a fixed point is always a minimal trap space
    for (uint32_t cfg = 0; cfg < count; ++cfg) {
        bool fixed = true;
        for (int i = 0; i < tt.n && fixed; ++i) {
            bool fi = (tt.t[i][cfg >> 6] >> (cfg & 63)) & 1;
            fixed = (fi == bool((cfg >> i) & 1));
        }
        if (fixed) {
            for (const auto& [i, b] : m)
                if (bool((cfg >> i) & 1) != b)
                    return false;
        }
    }
    MtsAnalysis a = analyze(tt, false);
    for (const SmallCube& t : a.mts) {
        for (const auto& [i, b] : m) {
            uint32_t bit = 1u << i;
            bool fixed_to_b = b ? ((t.one & bit) && !(t.zero & bit))
                                : ((t.zero & bit) && !(t.one & bit));
            if (!fixed_to_b)
                return false;
        }
    }
    (void)full;
    return true;
}

std::vector<PartialAssignment> reprogramming_impl(
    const BooleanNetwork& f, const PartialAssignment& m, int k,
    const ReprogrammingOptions& options, bool parallel) {
    if (f.size() > kMaxReprogDim)
        scale_exceeded("brute_reprogramming dimension");
    if (k > kMaxReprogK)
        scale_exceeded("brute_reprogramming k");

    std::vector<int> pool;
    for (int i = 0; i < f.size(); ++i) {
        if (options.uncontrollable.count(i))
            continue;
        if (options.forbid_marker_nodes && m.count(i))
            continue;
        pool.push_back(i);
    }

    // all candidate perturbations with at most k entries, by size
    std::vector<PartialAssignment> candidates{{}};
    std::vector<PartialAssignment> frontier{{}};
    for (int size = 1; size <= k; ++size) {
        std::vector<PartialAssignment> next;
        for (const auto& p : frontier) {
            int max_idx = p.empty() ? -1 : p.rbegin()->first;
            for (int i : pool) {
                if (i <= max_idx)
                    continue;
                for (bool b : {false, true}) {
                    PartialAssignment q = p;
                    q[i] = b;
                    next.push_back(std::move(q));
                }
            }
        }
        candidates.insert(candidates.end(), next.begin(), next.end());
        frontier = std::move(next);
    }

    TruthTables base(f);
    std::vector<uint8_t> valid(candidates.size(), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (int64_t ci = 0; ci < int64_t(candidates.size()); ++ci) {
        TruthTables tt = base;
        for (const auto& [i, b] : candidates[ci])
            tt.clamp(i, b);
        valid[ci] = all_mts_match_tables(tt, m);
    }
    (void)parallel;

    // candidates are ordered by size: keep the subset-minimal ones
    std::vector<PartialAssignment> result;
    for (size_t ci = 0; ci < candidates.size(); ++ci) {
        if (!valid[ci])
            continue;
        bool dominated = false;
        for (const auto& kept : result) {
            if (std::includes(candidates[ci].begin(), candidates[ci].end(),
                              kept.begin(), kept.end())) {
                dominated = true;
                break;
            }
        }
        if (!dominated)
            result.push_back(candidates[ci]);
    }
    return result;
}

}  // namespace

std::vector<Subcube> brute_mts(const BooleanNetwork& f) {
    return mts_impl(f, true);
}

std::vector<Subcube> brute_mts_serial(const BooleanNetwork& f) {
    return mts_impl(f, false);
}

Subcube brute_ts(const BooleanNetwork& f, const Configuration& x) {
    if (f.size() > kMaxTsDim)
        scale_exceeded("brute_ts dimension");
    TruthTables tt(f);
    std::vector<SmallCube> closed = collect_closed(tt);
    uint32_t cfg = 0;
    for (int i = 0; i < f.size(); ++i)
        if (x[i])
            cfg |= 1u << i;
    uint32_t full = (uint32_t(1) << f.size()) - 1;
    return to_subcube(ts_by_intersection(closed, cfg, full), f.size());
}

bool all_mts_match(const BooleanNetwork& f, const PartialAssignment& m) {
    if (f.size() > kMaxMtsDim)
        scale_exceeded("all_mts_match dimension");
    TruthTables tt(f);
    return all_mts_match_tables(tt, m);
}

std::vector<PartialAssignment> brute_reprogramming(
    const BooleanNetwork& f, const PartialAssignment& m, int k,
    const ReprogrammingOptions& options) {
    return reprogramming_impl(f, m, k, options, true);
}

std::vector<PartialAssignment> brute_reprogramming_serial(
    const BooleanNetwork& f, const PartialAssignment& m, int k,
    const ReprogrammingOptions& options) {
    return reprogramming_impl(f, m, k, options, false);
}

SynthesisVerdict brute_synthesis(const InfluenceGraph& g, enc::SynthMode mode,
                                 int clause_budget, const PartialAssignment& m,
                                 const std::vector<std::string>& names) {
    if (g.n > 3 || clause_budget > 2)
        scale_exceeded("brute_synthesis dimension or budget");
    if (!g.locally_monotone())
        throw std::invalid_argument("influence graph is not locally monotone");

    std::vector<std::vector<std::pair<int, bool>>> regulators(g.n);
    for (const auto& [src, dst] : g.pos_edges)
        regulators[dst].emplace_back(src, true);
    for (const auto& [src, dst] : g.neg_edges)
        regulators[dst].emplace_back(src, false);
    for (auto& r : regulators) {
        std::sort(r.begin(), r.end());
        if (r.size() > 3)
            scale_exceeded("brute_synthesis in-degree");
    }

    // local-function alternatives per component
    std::vector<std::vector<UnateDnf>> choices(g.n);
    for (int i = 0; i < g.n; ++i) {
        const auto& regs = regulators[i];
        if (regs.empty()) {
            choices[i].push_back(UnateDnf::make_constant(false));
            choices[i].push_back(UnateDnf::make_constant(true));
            continue;
        }
        int subsets = 1 << regs.size();
        std::vector<DnfClause> clause_pool;
        for (int sub = 1; sub < subsets; ++sub) {
            DnfClause c;
            for (size_t e = 0; e < regs.size(); ++e)
                if ((sub >> e) & 1)
                    c.push_back(DnfLiteral{regs[e].first, regs[e].second});
            clause_pool.push_back(std::move(c));
        }
        auto covered = [&](const std::vector<DnfClause>& cls) {
            if (mode != enc::SynthMode::Exact)
                return true;
            std::set<int> seen;
            for (const auto& c : cls)
                for (const auto& l : c)
                    seen.insert(l.var);
            return seen.size() == regs.size();
        };
        for (size_t a = 0; a < clause_pool.size(); ++a) {
            std::vector<DnfClause> one{clause_pool[a]};
            if (covered(one))
                choices[i].push_back(UnateDnf{one, std::nullopt});
            if (clause_budget >= 2) {
                for (size_t b = a + 1; b < clause_pool.size(); ++b) {
                    std::vector<DnfClause> two{clause_pool[a], clause_pool[b]};
                    if (covered(two))
                        choices[i].push_back(UnateDnf{two, std::nullopt});
                }
            }
        }
    }

    // cartesian product over components
    std::vector<size_t> idx(g.n, 0);
    while (true) {
        std::vector<UnateDnf> fs;
        for (int i = 0; i < g.n; ++i)
            fs.push_back(choices[i][idx[i]]);
        BooleanNetwork cand(names, fs);
        if (all_mts_match(cand, m))
            return SynthesisVerdict{true, std::move(cand)};
        int d = 0;
        while (d < g.n && ++idx[d] == choices[d].size()) {
            idx[d] = 0;
            ++d;
        }
        if (d == g.n)
            break;
    }
    return SynthesisVerdict{false, std::nullopt};
}

}  // namespace mts::oracle
