#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sroot {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

// Every failure carries a stable kind tag (e.g. "NonSquarefree") that the CLI
// turns into machine-readable error output.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

inline Rat make_rat(const Int& num, const Int& den) { return Rat(num, den); }

inline Int numer(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int denom(const Rat& q) { return boost::multiprecision::denominator(q); }

inline Int iabs(const Int& a) { return a < 0 ? Int(-a) : a; }
inline Rat rabs(const Rat& a) { return a < 0 ? Rat(-a) : a; }

inline Int igcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

inline Int factorial(int n) {
    Int r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// C(a, b), zero unless 0 <= b <= a.
inline Int binom(long a, long b) {
    if (b < 0 || a < 0 || b > a) return 0;
    if (b > a - b) b = a - b;
    Int r = 1;
    for (long i = 1; i <= b; ++i) {
        r *= (a - b + i);
        r /= i;
    }
    return r;
}

inline Rat rpow(const Rat& x, int e) {
    Rat r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

inline Int ipow(const Int& x, unsigned e) { return boost::multiprecision::pow(x, e); }

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

inline Int rfloor(const Rat& q) { return floor_div(numer(q), denom(q)); }
inline Int rceil(const Rat& q) { return -floor_div(-numer(q), denom(q)); }

// Accepts "p", "-p", "p/q".
inline Rat parse_rat(const std::string& s) {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(Int(s));
        Int d(s.substr(slash + 1));
        if (d == 0) throw Error("ParseError", "zero denominator in '" + s + "'");
        return Rat(Int(s.substr(0, slash)), d);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error("ParseError", "not a rational: '" + s + "'");
    }
}

inline std::string to_string(const Rat& q) { return q.str(); }
inline std::string to_string(const Int& a) { return a.str(); }

inline bool fits_i64(const Int& a) {
    return a >= std::numeric_limits<std::int64_t>::min() && a <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace sroot
