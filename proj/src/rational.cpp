#include "deleg/rational.hpp"

#include <stdexcept>

namespace deleg {

namespace {

bool isInteger(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

}  // namespace

std::optional<Rat> tryParseRational(const std::string& text) {
    const auto stripPlus = [](const std::string& s) {
        return (!s.empty() && s[0] == '+') ? s.substr(1) : s;
    };
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!isInteger(text)) return std::nullopt;
        return Rat(BigInt(stripPlus(text)));
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!isInteger(num) || !isInteger(den)) return std::nullopt;
    BigInt d(stripPlus(den));
    if (d == 0) return std::nullopt;
    return Rat(BigInt(stripPlus(num)), d);
}

Rat parseRational(const std::string& text) {
    auto r = tryParseRational(text);
    if (!r) throw std::invalid_argument("not an exact rational: \"" + text + "\"");
    return *r;
}

std::string toString(const Rat& r) {
    const BigInt num = numerator(r);
    const BigInt den = denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

std::string toDecimalString(const Rat& r, int digits) {
    if (digits < 0) throw std::invalid_argument("digits must be >= 0");
    BigInt scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;

    const bool negative = r < 0;
    const BigInt num = abs(numerator(r)) * scale;
    const BigInt den = abs(denominator(r));
    BigInt q = num / den;
    const BigInt rem = num % den;
    if (2 * rem >= den) ++q;  // half away from zero

    const BigInt whole = q / scale;
    const BigInt frac = q % scale;
    std::string out = (negative && q != 0) ? "-" : "";
    out += whole.str();
    if (digits > 0) {
        std::string f = frac.str();
        out += "." + std::string(static_cast<size_t>(digits) - f.size(), '0') + f;
    }
    return out;
}

double toDouble(const Rat& r) { return r.convert_to<double>(); }

}  // namespace deleg
