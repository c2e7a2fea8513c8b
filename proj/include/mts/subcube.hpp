#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mts/bn.hpp"

namespace mts {

/// An element of {0,1,*}^n in the dual-rail representation: dimension i is
/// free iff both rails are set, fixed to b iff only the b-rail is set.
/// Rails are packed 64 dimensions per word.
class Subcube {
public:
    Subcube() = default;
    explicit Subcube(int n) : n_(n), one_(words(n)), zero_(words(n)) {}

    static Subcube full(int n) {
        Subcube h(n);
        for (int i = 0; i < n; ++i) {
            h.set_one(i);
            h.set_zero(i);
        }
        return h;
    }
    static Subcube point(const Configuration& x) {
        Subcube h(static_cast<int>(x.size()));
        for (int i = 0; i < h.n_; ++i) {
            if (x[i])
                h.set_one(i);
            else
                h.set_zero(i);
        }
        return h;
    }

    int dim() const { return n_; }
    bool one(int i) const { return bit(one_, i); }
    bool zero(int i) const { return bit(zero_, i); }
    void set_one(int i) { one_[i >> 6] |= word1 << (i & 63); }
    void set_zero(int i) { zero_[i >> 6] |= word1 << (i & 63); }

    bool is_free(int i) const { return one(i) && zero(i); }
    bool is_point() const { return free_count() == 0; }
    /// Value of a fixed dimension.
    bool fixed_value(int i) const { return one(i); }

    int free_count() const;

    /// Whole-word rail access for inner evaluation loops.
    const std::vector<uint64_t>& one_words() const { return one_; }
    const std::vector<uint64_t>& zero_words() const { return zero_; }

    bool contains(const Configuration& x) const;
    /// c(other) subseteq c(this): pointwise rail inclusion.
    bool contains(const Subcube& other) const;

    /// Nonempty intersection, or an all-empty-rail cube when disjoint
    /// (check with `valid`).
    Subcube intersect(const Subcube& other) const;
    /// Every dimension has at least one rail set.
    bool valid() const;

    /// Text form over {0,1,-}, `-` for free dimensions.
    std::string str() const;
    static Subcube from_string(const std::string& s);

    bool operator==(const Subcube& o) const {
        return n_ == o.n_ && one_ == o.one_ && zero_ == o.zero_;
    }
    bool operator<(const Subcube& o) const {
        if (n_ != o.n_)
            return n_ < o.n_;
        if (one_ != o.one_)
            return one_ < o.one_;
        return zero_ < o.zero_;
    }

private:
    static constexpr uint64_t word1 = 1;
    static int words(int n) { return (n + 63) / 64; }
    static bool bit(const std::vector<uint64_t>& w, int i) {
        return (w[i >> 6] >> (i & 63)) & 1;
    }

    int n_ = 0;
    std::vector<uint64_t> one_;
    std::vector<uint64_t> zero_;
};

/// Subcube form of marker matching: every marked dimension must be fixed
/// to the marked value (a free dimension fails).
bool matches(const Subcube& h, const PartialAssignment& m);

}  // namespace mts
