#include "pmarket/errors.hpp"
#include "pmarket/rational.hpp"

#include <doctest.h>

using namespace pmarket;

TEST_CASE("parse accepts decimals, fractions and integers")
{
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("-4.5") == Rational(-9, 2));
    CHECK(parse_rational("7/3") == Rational(7, 3));
    CHECK(parse_rational("0.1") == Rational(1, 10));
    CHECK(parse_rational("7142.8") == Rational(35714, 5));
    CHECK(parse_rational("+2/4") == Rational(1, 2));
    CHECK(parse_rational(".5") == Rational(1, 2));
    CHECK(parse_rational("5.") == Rational(5));
}

TEST_CASE("parse rejects garbage")
{
    CHECK_THROWS_AS(parse_rational(""), DomainError);
    CHECK_THROWS_AS(parse_rational("abc"), DomainError);
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("1.2.3"), DomainError);
    CHECK_THROWS_AS(parse_rational("1e5"), DomainError);
    CHECK_THROWS_AS(parse_rational("-"), DomainError);
    CHECK_THROWS_AS(parse_rational("."), DomainError);
    CHECK_THROWS_AS(parse_rational("1/-2"), DomainError);
}

TEST_CASE("exact rendering")
{
    CHECK(format_exact(Rational(5)) == "5");
    CHECK(format_exact(Rational(-7, 3)) == "-7/3");
    CHECK(format_exact(parse_rational("2/4")) == "1/2");
}

TEST_CASE("decimal rendering rounds half to even")
{
    CHECK(format_decimal(Rational(1, 3), 6) == "0.333333");
    CHECK(format_decimal(Rational(2, 3), 6) == "0.666667");
    // exact ties land on even last digits
    CHECK(format_decimal(parse_rational("0.0000005"), 6) == "0.000000");
    CHECK(format_decimal(parse_rational("0.0000015"), 6) == "0.000002");
    CHECK(format_decimal(parse_rational("0.0000025"), 6) == "0.000002");
    CHECK(format_decimal(parse_rational("-0.0000015"), 6) == "-0.000002");
    CHECK(format_decimal(parse_rational("-0.0000005"), 6) == "0.000000");
    CHECK(format_decimal(Rational(1495), 6) == "1495.000000");
    CHECK(format_decimal(Rational(0), 6) == "0.000000");
    CHECK(format_decimal(parse_rational("2.5"), 0) == "2");
    CHECK(format_decimal(parse_rational("3.5"), 0) == "4");
}

TEST_CASE("within compares with exact tolerance")
{
    CHECK(within(parse_rational("41.6667"), parse_rational("41.666"), parse_rational("0.001")));
    CHECK_FALSE(within(parse_rational("41.668"), parse_rational("41.666"), parse_rational("0.001")));
}
