#include <doctest.h>

#include "vctrack/rational.hpp"

using vctrack::Rational;

TEST_CASE("decimal strings parse exactly")
{
    CHECK(Rational::from_decimal("19.99") == Rational(1999, 100));
    CHECK(Rational::from_decimal("19.990000") == Rational::from_decimal("19.99"));
    CHECK(Rational::from_decimal("7") == Rational(7));
    CHECK(Rational::from_decimal("0.0") == Rational(0));
    CHECK(Rational::parse("1999/1000") == Rational(1999, 1000));
    CHECK(Rational::parse("0.383808") == Rational(5997, 15625));

    for (const char* bad : {"", ".", "1.", ".5", "-1", "+1", "1e5", "1,5", " 1", "1.2.3", "0x10", "NaN"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Rational::from_decimal(bad), std::invalid_argument);
    }
}

TEST_CASE("one tenth summed a thousand times is exactly one hundred")
{
    Rational sum;
    const Rational tenth = Rational::from_decimal("0.1");
    for (int i = 0; i < 1000; ++i) {
        sum += tenth;
    }
    CHECK(sum == Rational(100));
}

TEST_CASE("fraction and exact renderings")
{
    CHECK(Rational(1999, 1000).to_fraction_string() == "1999/1000");
    CHECK(Rational(2000, 1000).to_fraction_string() == "2");
    CHECK(Rational(5997, 15625).to_exact_string() == "0.383808");
    CHECK(Rational(1999, 100).to_exact_string() == "19.99");
    CHECK(Rational(1, 3).to_exact_string() == "1/3");
    CHECK(Rational(48).to_exact_string() == "48");
}

TEST_CASE("display truncates to cents")
{
    CHECK(Rational(1999, 1000).to_display_string() == "1.99");
    CHECK(Rational(5997, 15625).to_display_string() == "0.38");
    CHECK(Rational(1999, 100).to_display_string() == "19.99");
    CHECK(Rational(0).to_display_string() == "0.00");
    CHECK(Rational(1, 200).to_display_string() == "0.00");
    CHECK(Rational(3998, 100).to_display_string() == "39.98");
    CHECK(Rational(12345).to_display_string() == "12345.00");
    CHECK(Rational(1, 3).to_display_string(4) == "0.3333");
}

TEST_CASE("arithmetic and ordering")
{
    const Rational a(1, 3);
    const Rational b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == b);
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(b < a);
    CHECK((a - a).is_zero());
    CHECK((b - a).is_negative());
    CHECK_THROWS_AS(a / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("large values stay exact")
{
    const Rational big = Rational::from_decimal("123456789012345678901234567890.123456789");
    CHECK(big * Rational(1000000000) ==
          Rational(vctrack::parse_bigint("123456789012345678901234567890123456789")));
}
