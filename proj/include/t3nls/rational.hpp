#pragma once

// Exact rational arithmetic for the interaction-phase identity checks and for
// config files that supply equation coefficients as "p/q" strings.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace t3nls {

struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    bool is_integer() const { return den == 1; }
    bool is_zero() const { return num == 0; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(Rational a, Rational b) { return Rational(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rational operator-(Rational a, Rational b) { return Rational(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rational operator-(Rational a) { return Rational(-a.num, a.den); }
    friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
    friend Rational operator/(Rational a, Rational b) {
        if (b.num == 0) throw std::invalid_argument("Rational: division by zero");
        return Rational(a.num * b.den, a.den * b.num);
    }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
};

// Parses "p/q" or a plain integer string. Throws std::invalid_argument on junk.
inline Rational parse_rational(const std::string& text) {
    std::size_t slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
        long long n = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("parse_rational: trailing characters in '" + text + "'");
        return Rational(n);
    }
    long long n = std::stoll(text.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument("parse_rational: bad numerator in '" + text + "'");
    long long d = std::stoll(text.substr(slash + 1), &used);
    if (used != text.size() - slash - 1) throw std::invalid_argument("parse_rational: bad denominator in '" + text + "'");
    return Rational(n, d);
}

inline std::string to_string(const Rational& r) {
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

} // namespace t3nls
