#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fairdiv {

using BigInt = boost::multiprecision::cpp_int;

/// Exact non-negative rational scalar.
///
/// Always kept in canonical form: denominator > 0, gcd(numerator, denominator) = 1,
/// numerator >= 0. All arithmetic is exact; subtraction below zero and division by
/// zero raise DomainError. There is deliberately no conversion to or from floating
/// point: every consumer of this type depends on equality-exact comparisons.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t value);
    Rational(BigInt value);
    Rational(BigInt numerator, BigInt denominator);
    Rational(std::int64_t numerator, std::int64_t denominator);

    /// Parses "p/q", a plain integer, or a decimal string ("0.1" -> 1/10, exactly).
    static Rational parse(std::string_view text);

    const BigInt& num() const noexcept { return num_; }
    const BigInt& den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    bool is_positive() const noexcept { return num_ > 0; }
    bool is_integer() const noexcept { return den_ == 1; }

    BigInt floor() const { return num_ / den_; }

    /// Canonical text form: "p/q", or just "p" when the denominator is 1.
    std::string str() const;

    Rational& operator+=(const Rational& other);
    Rational& operator-=(const Rational& other);
    Rational& operator*=(const Rational& other);
    Rational& operator/=(const Rational& other);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    std::strong_ordering operator<=>(const Rational& other) const;
    bool operator==(const Rational& other) const {
        return num_ == other.num_ && den_ == other.den_;
    }

private:
    void normalize();

    BigInt num_;
    BigInt den_;
};

}  // namespace fairdiv
