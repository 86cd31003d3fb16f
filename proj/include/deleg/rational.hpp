#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace deleg {

// All probabilities, payoffs and scores are exact rationals. Floating point
// is confined to the bandit loop and the UCB radius.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "7", "-3", "3/4", "-12/8" (normalized on construction).
// Decimal literals are rejected on purpose: files must stay exact.
Rat parseRational(const std::string& text);
std::optional<Rat> tryParseRational(const std::string& text);

// Canonical text form: "p/q" when q > 1, otherwise just "p".
std::string toString(const Rat& r);

// Fixed-point decimal, round-half-away-from-zero: (-47/30, 2) -> "-1.57".
std::string toDecimalString(const Rat& r, int digits);

double toDouble(const Rat& r);

}  // namespace deleg
