#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <utility>

namespace absolve {

// Exact arbitrary-precision arithmetic. Constant folding in the fraction
// domain multiplies values without bound, so fixed-width integers are out.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class ArithmeticError : public std::runtime_error {
public:
    explicit ArithmeticError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_integer(const Rational& r) {
    return denominator(r) == 1;
}

inline Rational make_rational(BigInt num, BigInt den) {
    if (den == 0) {
        throw ArithmeticError("zero denominator");
    }
    return Rational(std::move(num), std::move(den));
}

// "p" for integers, "p/q" otherwise (q > 0, lowest terms).
inline std::string rational_to_string(const Rational& r) {
    std::string out = numerator(r).str();
    if (!is_integer(r)) {
        out += "/";
        out += denominator(r).str();
    }
    return out;
}

inline Rational rational_from_string(const std::string& text) {
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) {
            return Rational(BigInt(text));
        }
        return make_rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const ArithmeticError&) {
        throw;
    } catch (const std::exception&) {
        throw ArithmeticError("malformed rational: '" + text + "'");
    }
}

inline bool fits_int64(const BigInt& v) {
    static const BigInt lo = std::numeric_limits<long long>::min();
    static const BigInt hi = std::numeric_limits<long long>::max();
    return v >= lo && v <= hi;
}

}  // namespace absolve
