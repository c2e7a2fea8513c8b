#include "mts/subcube.hpp"

#include <bit>
#include <stdexcept>

namespace mts {

int Subcube::free_count() const {
    int c = 0;
    for (size_t w = 0; w < one_.size(); ++w)
        c += std::popcount(one_[w] & zero_[w]);
    return c;
}

bool Subcube::contains(const Configuration& x) const {
    for (int i = 0; i < n_; ++i) {
        if (x[i] ? !one(i) : !zero(i))
            return false;
    }
    return true;
}

bool Subcube::contains(const Subcube& other) const {
    for (size_t w = 0; w < one_.size(); ++w) {
        if ((other.one_[w] & ~one_[w]) || (other.zero_[w] & ~zero_[w]))
            return false;
    }
    return true;
}

Subcube Subcube::intersect(const Subcube& other) const {
    Subcube r(n_);
    for (size_t w = 0; w < one_.size(); ++w) {
        r.one_[w] = one_[w] & other.one_[w];
        r.zero_[w] = zero_[w] & other.zero_[w];
    }
    return r;
}

bool Subcube::valid() const {
    for (int i = 0; i < n_; ++i)
        if (!one(i) && !zero(i))
            return false;
    return true;
}

std::string Subcube::str() const {
    std::string s(n_, '?');
    for (int i = 0; i < n_; ++i)
        s[i] = is_free(i) ? '-' : (one(i) ? '1' : '0');
    return s;
}

Subcube Subcube::from_string(const std::string& s) {
    Subcube h(static_cast<int>(s.size()));
    for (int i = 0; i < h.n_; ++i) {
        switch (s[i]) {
        case '0':
            h.set_zero(i);
            break;
        case '1':
            h.set_one(i);
            break;
        case '-':
        case '*':
            h.set_one(i);
            h.set_zero(i);
            break;
        default:
            throw std::invalid_argument("bad subcube character: " +
                                        std::string(1, s[i]));
        }
    }
    return h;
}

bool matches(const Subcube& h, const PartialAssignment& m) {
    for (const auto& [i, b] : m) {
        if (h.is_free(i) || h.fixed_value(i) != b)
            return false;
    }
    return true;
}

}  // namespace mts
