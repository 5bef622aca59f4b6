#include "vctrack/rational.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace vctrack {

namespace {

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

BigInt pow10(std::size_t n)
{
    BigInt r = 1;
    for (std::size_t i = 0; i < n; ++i) {
        r *= 10;
    }
    return r;
}

} // namespace

BigInt parse_bigint(std::string_view text)
{
    if (!all_digits(text)) {
        throw std::invalid_argument("not a non-negative integer: '" + std::string(text) + "'");
    }
    // cpp_int reads a leading 0 as an octal prefix.
    const auto first = text.find_first_not_of('0');
    return first == std::string_view::npos ? BigInt(0) : BigInt(std::string(text.substr(first)));
}

Rational::Rational(const BigInt& num, const BigInt& den)
{
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    value_ = Value(num, den);
}

Rational Rational::from_decimal(std::string_view text)
{
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    if (!all_digits(whole)) {
        throw std::invalid_argument("bad decimal: '" + std::string(text) + "'");
    }
    if (dot == std::string_view::npos) {
        return Rational(parse_bigint(whole));
    }
    const std::string_view frac = text.substr(dot + 1);
    if (!all_digits(frac)) {
        throw std::invalid_argument("bad decimal: '" + std::string(text) + "'");
    }
    const BigInt num = parse_bigint(std::string(whole) + std::string(frac));
    return Rational(num, pow10(frac.size()));
}

Rational Rational::parse(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return from_decimal(text);
    }
    return Rational(parse_bigint(text.substr(0, slash)), parse_bigint(text.substr(slash + 1)));
}

BigInt Rational::numerator() const { return boost::multiprecision::numerator(value_); }
BigInt Rational::denominator() const { return boost::multiprecision::denominator(value_); }

bool Rational::is_zero() const { return value_ == 0; }
bool Rational::is_negative() const { return value_ < 0; }
bool Rational::is_integer() const { return denominator() == 1; }

std::string Rational::to_fraction_string() const
{
    if (is_integer()) {
        return numerator().str();
    }
    return numerator().str() + "/" + denominator().str();
}

std::string Rational::to_exact_string() const
{
    BigInt den = denominator();
    std::size_t twos = 0;
    std::size_t fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    if (den != 1) {
        return to_fraction_string();
    }
    const std::size_t places = std::max(twos, fives);
    if (places == 0) {
        return numerator().str();
    }
    const BigInt scaled = numerator() * pow10(places) / denominator();
    return Rational(scaled, pow10(places)).to_display_string(static_cast<int>(places));
}

std::string Rational::to_display_string(int places) const
{
    const BigInt scale = pow10(static_cast<std::size_t>(std::max(places, 0)));
    BigInt num = numerator();
    const bool negative = num < 0;
    if (negative) {
        num = -num;
    }
    const BigInt scaled = num * scale / denominator();
    std::string digits = scaled.str();
    if (places > 0) {
        const auto p = static_cast<std::size_t>(places);
        if (digits.size() <= p) {
            digits.insert(0, p + 1 - digits.size(), '0');
        }
        digits.insert(digits.size() - p, 1, '.');
    }
    if (negative && scaled != 0) {
        digits.insert(0, 1, '-');
    }
    return digits;
}

Rational& Rational::operator+=(const Rational& o)
{
    value_ += o.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o)
{
    value_ -= o.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o)
{
    value_ *= o.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.value_ == 0) {
        throw std::domain_error("division by zero");
    }
    value_ /= o.value_;
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    if (a.value_ < b.value_) {
        return std::strong_ordering::less;
    }
    if (b.value_ < a.value_) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r)
{
    return os << r.to_fraction_string();
}

} // namespace vctrack
