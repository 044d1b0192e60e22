#pragma once

// Exact integer / rational arithmetic used by the relation lattice and the
// root-of-unity algebra. Everything here must round-trip through the textual
// "num/den" form without loss.
//
// Rational is hand-rolled on cpp_int: boost::rational's mixed-type comparison
// operators recurse into themselves when instantiated with a multiprecision
// backend (boost 1.74, rational.hpp operator==(Arg, rational)), so it cannot
// be used here.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>
#include <utility>

#include "errors.hpp"

namespace holobias {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}                 // NOLINT(google-explicit-constructor)
    Rational(long long n) : num_(n), den_(1) {}           // NOLINT(google-explicit-constructor)
    Rational(const BigInt& n) : num_(n), den_(1) {}       // NOLINT(google-explicit-constructor)
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_ == 0) throw constraint_error("rational with zero denominator");
        normalize();
    }

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }

    // canonical form (reduced, positive denominator) makes equality memberwise
    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const BigInt lhs = a.num_ * b.den_, rhs = b.num_ * a.den_;
        return lhs < rhs ? std::strong_ordering::less
             : lhs > rhs ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
    }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    BigInt num_;
    BigInt den_;
};

inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

inline double to_double(const Rational& q) {
    return to_double(q.numerator()) / to_double(q.denominator());
}

// Parses "num/den" or "num"; whitespace is not tolerated.
inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw parse_error("rational with zero denominator: " + text);
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw parse_error("bad rational '" + text + "': " + e.what());
    }
}

inline std::string format_rational(const Rational& q) {
    std::string s = q.numerator().str();
    if (q.denominator() != 1) s += "/" + q.denominator().str();
    return s;
}

// Reduces q into [0, 1).
inline Rational frac_mod1(const Rational& q) {
    BigInt fl = q.numerator() / q.denominator();
    if (q.numerator() < 0 && fl * q.denominator() != q.numerator()) fl -= 1;
    return q - Rational(fl);
}

} // namespace holobias
