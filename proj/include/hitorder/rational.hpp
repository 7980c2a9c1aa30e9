#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "hitorder/errors.hpp"

namespace hitorder {

/// Exact arbitrary-precision fraction, always in lowest terms with a
/// positive denominator. Thin value wrapper around GMP's mpq_class.
class Rational {
  public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT: implicit by design of the numeric tower
    Rational(int value) : value_(value) {}   // NOLINT
    Rational(long num, long den) {
        if (den == 0) throw ParseError("zero denominator");
        value_ = mpq_class(num, den);
        value_.canonicalize();
    }
    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    /// Accepts "a/b", integers and decimals ("0.125", "-2.5e-1").
    static Rational parse(std::string_view text);

    const mpq_class& raw() const { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    bool is_zero() const { return sgn(value_) == 0; }
    bool is_one() const { return value_ == 1; }
    int sign() const { return sgn(value_); }

    double to_double() const { return value_.get_d(); }

    /// ln(x) for x > 0 without going through a double that may underflow.
    double log() const {
        auto lnz = [](const mpz_class& z) {
            long exp = 0;
            double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
            return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
        };
        return lnz(numerator()) - lnz(denominator());
    }

    /// "a/b", or "a" when the denominator is 1.
    std::string str() const {
        if (value_.get_den() == 1) return value_.get_num().get_str();
        return value_.get_str();
    }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error("division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  private:
    mpq_class value_{0};
};

inline Rational pow(Rational base, unsigned exp) {
    Rational out(1);
    while (exp) {
        if (exp & 1U) out *= base;
        base *= base;
        exp >>= 1U;
    }
    return out;
}

inline Rational Rational::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto bad = [&]() { return ParseError("cannot parse rational '" + std::string(text) + "'"); };
    auto is_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    auto to_mpz = [](std::string_view s) {
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        return mpz_class(std::string(s), 10);
    };

    std::string_view s = trim(text);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = trim(s.substr(0, slash));
        auto den = trim(s.substr(slash + 1));
        if (!is_int(num) || !is_int(den)) throw bad();
        mpz_class d = to_mpz(den);
        if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return Rational(mpq_class(to_mpz(num), d));
    }

    // decimal: [sign] digits [. digits] [e [sign] digits]
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string_view mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = s.substr(0, e);
        auto ex = s.substr(e + 1);
        if (!is_int(ex) || ex.size() > 6) throw bad();
        exponent = std::stol(std::string(ex));
    }
    std::string digits;
    long frac_len = 0;
    bool seen_dot = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (seen_dot) throw bad();
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_dot) ++frac_len;
        } else {
            throw bad();
        }
    }
    if (digits.empty()) throw bad();
    mpq_class q{mpz_class(digits, 10)};
    long shift = exponent - frac_len;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift < 0)
        q /= ten_pow;
    else
        q *= ten_pow;
    if (negative) q = -q;
    return Rational(q);
}

}  // namespace hitorder

template <>
struct std::hash<hitorder::Rational> {
    std::size_t operator()(const hitorder::Rational& r) const noexcept {
        return std::hash<std::string>{}(r.str());
    }
};
