#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "deleg/rational.hpp"

using namespace deleg;

TEST_CASE("parsing accepts integers and fractions only") {
    CHECK(parseRational("7") == Rat(7));
    CHECK(parseRational("-3") == Rat(-3));
    CHECK(parseRational("3/4") == Rat(3, 4));
    CHECK(parseRational("-12/8") == Rat(-3, 2));
    CHECK(parseRational("+2") == Rat(2));

    CHECK_FALSE(tryParseRational("0.5").has_value());
    CHECK_FALSE(tryParseRational("1e3").has_value());
    CHECK_FALSE(tryParseRational("").has_value());
    CHECK_FALSE(tryParseRational("1/0").has_value());
    CHECK_FALSE(tryParseRational("a/b").has_value());
    CHECK_THROWS_AS(parseRational("0.5"), std::invalid_argument);
}

TEST_CASE("canonical text form") {
    CHECK(toString(Rat(3, 4)) == "3/4");
    CHECK(toString(Rat(-3, 2)) == "-3/2");
    CHECK(toString(Rat(4, 2)) == "2");
    CHECK(toString(Rat(0)) == "0");
}

TEST_CASE("decimal rendering rounds half away from zero") {
    CHECK(toDecimalString(Rat(-47, 30), 2) == "-1.57");
    CHECK(toDecimalString(Rat(-1, 9), 2) == "-0.11");
    CHECK(toDecimalString(Rat(23, 9), 2) == "2.56");
    CHECK(toDecimalString(Rat(23, 15), 2) == "1.53");
    CHECK(toDecimalString(Rat(5, 3), 2) == "1.67");
    CHECK(toDecimalString(Rat(11, 2), 1) == "5.5");
    CHECK(toDecimalString(Rat(1, 2), 0) == "1");
    CHECK(toDecimalString(Rat(-1, 2), 0) == "-1");
    CHECK(toDecimalString(Rat(0), 2) == "0.00");
    CHECK(toDecimalString(Rat(-1, 400), 2) == "0.00");
    CHECK(toDecimalString(Rat(2), 2) == "2.00");
}
