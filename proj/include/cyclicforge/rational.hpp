#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "cyclicforge/errors.hpp"

namespace cyclicforge {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number with arbitrary-precision numerator and denominator.
/// Always stored reduced with a positive denominator.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
    Rational(long long num, long long den) {
        if (den == 0) throw Error("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        v_ = boost::multiprecision::cpp_rational(num, den);
    }
    explicit Rational(boost::multiprecision::cpp_rational v) : v_(std::move(v)) {}

    BigInt num() const { return numerator(v_); }
    BigInt den() const { return denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return denominator(v_) == 1; }
    bool is_negative() const { return v_ < 0; }

    Rational operator-() const { return Rational(-v_); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    double to_double() const { return v_.convert_to<double>(); }

    /// Numerator as int64, throwing if it does not fit (used by JSON output).
    std::int64_t num_i64() const { return to_i64(num()); }
    std::int64_t den_i64() const { return to_i64(den()); }

    std::string str() const {
        if (is_integer()) return num().str();
        return num().str() + "/" + den().str();
    }

private:
    static std::int64_t to_i64(const BigInt& x) {
        if (x > std::numeric_limits<std::int64_t>::max() ||
            x < std::numeric_limits<std::int64_t>::min())
            throw Error("Rational: value exceeds int64 range");
        return x.convert_to<std::int64_t>();
    }

    boost::multiprecision::cpp_rational v_;
};

inline Rational rational_gcd(const Rational& a, const Rational& b) {
    // gcd over rationals: gcd of numerators / lcm of denominators.
    BigInt gn = boost::multiprecision::gcd(a.num(), b.num());
    BigInt ld = boost::multiprecision::lcm(a.den(), b.den());
    return Rational(boost::multiprecision::cpp_rational(gn, ld));
}

}  // namespace cyclicforge
