#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace mergedyn {

// Small exact rational. Cost tables only involve terms like 3 - 1/k with
// k <= n, and tropical path sums over graphs with at most a few dozen
// edges, so 64-bit numerator/denominator never get close to overflow.
struct Rat {
    long long num = 0;
    long long den = 1;

    constexpr Rat() = default;
    constexpr Rat(long long n) : num(n), den(1) {}
    Rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
    friend Rat operator/(Rat a, Rat b) { return Rat(a.num * b.den, a.den * b.num); }
    Rat& operator+=(Rat o) { *this = *this + o; return *this; }

    friend bool operator==(Rat a, Rat b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(Rat a, Rat b) { return !(a == b); }
    friend bool operator<(Rat a, Rat b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(Rat a, Rat b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(Rat a, Rat b) { return b < a; }
    friend bool operator>=(Rat a, Rat b) { return b <= a; }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
    friend std::ostream& operator<<(std::ostream& os, Rat r) { return os << r.str(); }
};

} // namespace mergedyn
