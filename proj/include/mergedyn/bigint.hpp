#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mergedyn {

// Unsigned big integer, base 1e9 limbs, little-endian. Forest counts blow
// past 64 bits around n = 21, and the counting layer is required to stay
// exact, so we carry our own minimal implementation: multiply by machine
// words, exact division by machine words, full multiply for cross checks.
class BigUint {
public:
    BigUint() : limbs_{0} {}
    BigUint(unsigned long long v) {
        if (v == 0) limbs_.push_back(0);
        while (v > 0) { limbs_.push_back(static_cast<uint32_t>(v % BASE)); v /= BASE; }
    }

    bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

    BigUint& mul(unsigned long long m) {
        if (m == 0) { limbs_.assign(1, 0); return *this; }
        // split m so per-limb products fit in unsigned 128-free arithmetic
        unsigned long long carry = 0;
        for (auto& limb : limbs_) {
            unsigned __int128 cur = static_cast<unsigned __int128>(limb) * m + carry;
            limb = static_cast<uint32_t>(cur % BASE);
            carry = static_cast<unsigned long long>(cur / BASE);
        }
        while (carry > 0) { limbs_.push_back(static_cast<uint32_t>(carry % BASE)); carry /= BASE; }
        return *this;
    }

    // exact division; throws if a remainder is left over
    BigUint& div_exact(unsigned long long d) {
        if (d == 0) throw std::domain_error("BigUint: divide by zero");
        unsigned __int128 rem = 0;
        for (size_t i = limbs_.size(); i-- > 0;) {
            unsigned __int128 cur = rem * BASE + limbs_[i];
            limbs_[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        if (rem != 0) throw std::domain_error("BigUint: inexact division");
        trim();
        return *this;
    }

    friend BigUint operator*(const BigUint& a, const BigUint& b) {
        std::vector<unsigned long long> acc(a.limbs_.size() + b.limbs_.size(), 0);
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            unsigned long long carry = 0;
            for (size_t j = 0; j < b.limbs_.size(); ++j) {
                unsigned __int128 cur = static_cast<unsigned __int128>(a.limbs_[i]) * b.limbs_[j]
                                        + acc[i + j] + carry;
                acc[i + j] = static_cast<unsigned long long>(cur % BASE);
                carry = static_cast<unsigned long long>(cur / BASE);
            }
            size_t k = i + b.limbs_.size();
            while (carry > 0) {
                unsigned __int128 cur = acc[k] + carry;
                acc[k] = static_cast<unsigned long long>(cur % BASE);
                carry = static_cast<unsigned long long>(cur / BASE);
                ++k;
            }
        }
        BigUint out;
        out.limbs_.assign(acc.begin(), acc.end());
        out.trim();
        return out;
    }

    friend BigUint operator+(const BigUint& a, const BigUint& b) {
        BigUint out;
        out.limbs_.clear();
        unsigned long long carry = 0;
        size_t n = std::max(a.limbs_.size(), b.limbs_.size());
        for (size_t i = 0; i < n; ++i) {
            unsigned long long cur = carry;
            if (i < a.limbs_.size()) cur += a.limbs_[i];
            if (i < b.limbs_.size()) cur += b.limbs_[i];
            out.limbs_.push_back(static_cast<uint32_t>(cur % BASE));
            carry = cur / BASE;
        }
        if (carry) out.limbs_.push_back(static_cast<uint32_t>(carry));
        return out;
    }

    friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }
    friend bool operator!=(const BigUint& a, const BigUint& b) { return !(a == b); }

    bool fits_u64() const {
        return limbs_.size() <= 3 && to_double() < 1.8e19;
    }
    unsigned long long to_u64() const {
        unsigned long long v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * BASE + limbs_[i];
        return v;
    }
    double to_double() const {
        double v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * BASE + limbs_[i];
        return v;
    }
    double log() const {
        // enough limbs for a full double mantissa, plus the base-1e9 exponent
        double head = 0;
        size_t n = limbs_.size();
        size_t take = n < 4 ? n : 4;
        for (size_t i = 0; i < take; ++i) head = head * BASE + limbs_[n - 1 - i];
        return std::log(head) + 9.0 * std::log(10.0) * static_cast<double>(n - take);
    }

    std::string str() const {
        std::string s = std::to_string(limbs_.back());
        for (size_t i = limbs_.size() - 1; i-- > 0;) {
            std::string part = std::to_string(limbs_[i]);
            s += std::string(9 - part.size(), '0') + part;
        }
        return s;
    }

private:
    static constexpr unsigned long long BASE = 1000000000ull;
    std::vector<uint32_t> limbs_;
    void trim() {
        while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
    }
};

inline BigUint big_factorial(unsigned n) {
    BigUint r(1);
    for (unsigned i = 2; i <= n; ++i) r.mul(i);
    return r;
}

// (2k-3)!! with the conventions (-1)!! = 1!! = 1
inline BigUint odd_double_factorial(unsigned k) {
    BigUint r(1);
    if (k < 2) return r;
    for (unsigned m = 3; m + 3 <= 2 * k; m += 2) r.mul(m);
    return r;
}

} // namespace mergedyn
