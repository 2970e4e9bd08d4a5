#include "fairdiv/rational.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <cctype>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

BigInt pow10(std::size_t k) {
    BigInt r = 1;
    for (std::size_t i = 0; i < k; ++i) r *= 10;
    return r;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Rational::Rational(std::int64_t value) : num_(value), den_(1) {
    if (value < 0) throw DomainError("negative value not representable: " + std::to_string(value));
}

Rational::Rational(BigInt value) : num_(std::move(value)), den_(1) {
    if (num_ < 0) throw DomainError("negative value not representable: " + num_.str());
}

Rational::Rational(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    normalize();
}

Rational::Rational(std::int64_t numerator, std::int64_t denominator)
    : num_(numerator), den_(denominator) {
    normalize();
}

void Rational::normalize() {
    if (den_ == 0) throw DomainError("zero denominator");
    if (den_ < 0) {
        den_ = -den_;
        num_ = -num_;
    }
    if (num_ < 0) throw DomainError("negative value not representable: " + num_.str() + "/" + den_.str());
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = boost::integer::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::parse(std::string_view text) {
    // Trim surrounding whitespace.
    std::size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    std::string_view body = text.substr(begin, end - begin);
    if (body.empty()) throw ParseError("empty value");
    if (body.front() == '-') throw DomainError("negative value: " + std::string(body));
    if (body.front() == '+') body.remove_prefix(1);

    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        std::string_view p = body.substr(0, slash);
        std::string_view q = body.substr(slash + 1);
        if (!all_digits(p) || !all_digits(q))
            throw ParseError("malformed rational '" + std::string(body) + "'");
        BigInt den{std::string(q)};
        if (den == 0) throw ParseError("zero denominator in '" + std::string(body) + "'");
        return Rational(BigInt{std::string(p)}, std::move(den));
    }
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
        std::string_view ipart = body.substr(0, dot);
        std::string_view fpart = body.substr(dot + 1);
        if ((ipart.empty() && fpart.empty()) || (!ipart.empty() && !all_digits(ipart)) ||
            (!fpart.empty() && !all_digits(fpart)))
            throw ParseError("malformed decimal '" + std::string(body) + "'");
        BigInt whole = ipart.empty() ? BigInt(0) : BigInt(std::string(ipart));
        BigInt frac = fpart.empty() ? BigInt(0) : BigInt(std::string(fpart));
        BigInt scale = pow10(fpart.size());
        return Rational(whole * scale + frac, std::move(scale));
    }
    if (!all_digits(body)) throw ParseError("malformed value '" + std::string(body) + "'");
    return Rational(BigInt(std::string(body)));
}

std::string Rational::str() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
}

Rational& Rational::operator+=(const Rational& other) {
    num_ = num_ * other.den_ + other.num_ * den_;
    den_ *= other.den_;
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& other) {
    BigInt lhs = num_ * other.den_;
    BigInt rhs = other.num_ * den_;
    if (lhs < rhs)
        throw DomainError("subtraction below zero: " + str() + " - " + other.str());
    num_ = lhs - rhs;
    den_ *= other.den_;
    normalize();
    return *this;
}

Rational& Rational::operator*=(const Rational& other) {
    num_ *= other.num_;
    den_ *= other.den_;
    normalize();
    return *this;
}

Rational& Rational::operator/=(const Rational& other) {
    if (other.is_zero()) throw DomainError("division by zero");
    num_ *= other.den_;
    den_ *= other.num_;
    normalize();
    return *this;
}

std::strong_ordering Rational::operator<=>(const Rational& other) const {
    BigInt lhs = num_ * other.den_;
    BigInt rhs = other.num_ * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace fairdiv
