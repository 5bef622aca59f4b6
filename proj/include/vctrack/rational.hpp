#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace vctrack {

using BigInt = boost::multiprecision::cpp_int;

/// Exact arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value) : value_(value) {}  // NOLINT(implicit)
    Rational(const BigInt& value) : value_(value) {} // NOLINT(implicit)
    Rational(const BigInt& num, const BigInt& den);

    /// Parses a plain non-negative decimal string ("19.99", "0.1", "7").
    /// No sign, exponent, or surrounding whitespace is accepted.
    /// Throws std::invalid_argument on anything else.
    static Rational from_decimal(std::string_view text);

    /// Parses either "n/d" or a decimal string.
    static Rational parse(std::string_view text);

    BigInt numerator() const;
    BigInt denominator() const;

    bool is_zero() const;
    bool is_negative() const;
    bool is_integer() const;

    /// "n/d" in lowest terms, or "n" when the value is an integer.
    std::string to_fraction_string() const;

    /// Exact decimal expansion when the value terminates ("19.99",
    /// "0.383808"); falls back to the fraction form otherwise.
    std::string to_exact_string() const;

    /// Fixed-point rendering with `places` decimals, truncating toward zero.
    std::string to_display_string(int places = 2) const;

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    using Value = boost::multiprecision::cpp_rational;
    explicit Rational(Value v) : value_(std::move(v)) {}

    Value value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Parses a non-negative base-10 integer with no sign or separators.
BigInt parse_bigint(std::string_view text);

} // namespace vctrack
