#pragma once

#include "sroot/modarith.hpp"
#include "sroot/numeric.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace sroot::decimal {

struct PeriodSplit {
    u64 a = 0, b = 0;
    u64 e = 0;  // ord_b(10)
    u64 n = 0, l = 0;
    u64 L = 0, B = 0;
    std::vector<std::string> blocks;  // l-digit blocks, leading zeros kept in the text only
    u64 k = 0;

    // Parsed as a decimal value: "047" is 47.
    Int block_value(std::size_t i) const {
        const std::string& s = blocks.at(i);
        auto nz = s.find_first_not_of('0');
        return nz == std::string::npos ? Int(0) : Int(s.substr(nz));
    }

    // "142 + 857 = 1*999", with the divisor shown when L > 1.
    std::string display() const {
        std::string s;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (i) s += " + ";
            s += blocks[i];
        }
        s += " = " + std::to_string(k) + "*" + std::string(l, '9');
        if (L > 1) s += "/" + std::to_string(L);
        return s;
    }
};

// Splits the period of a/b into n blocks and recovers the multiplier k twice:
// once from the digit blocks, once from the residues s_i = 10^{li} a mod b.
inline PeriodSplit period_split(u64 a, u64 b, u64 n) {
    if (b < 2 || a == 0 || a >= b) throw Error("OutOfRange", "period_split needs 0 < a < b");
    if (n < 2) throw Error("OutOfRange", "period_split needs n > 1");
    if (std::gcd(a, b) != 1 || b % 2 == 0 || b % 5 == 0)
        throw Error("NotCoprime", "gcd(10a, b) must be 1");
    PeriodSplit ps;
    ps.a = a;
    ps.b = b;
    ps.n = n;
    ps.e = mult_order(10 % b, b);
    if (ps.e % n != 0) throw Error("DoesNotDivide", "n does not divide the period length " + std::to_string(ps.e));
    ps.l = ps.e / n;
    u64 tl = powmod(10, ps.l, b);
    // gcd(10^l - 1, b) = gcd((10^l - 1) mod b, b)
    ps.L = std::gcd(submod(tl, 1, b), b);
    ps.B = b / ps.L;

    // Long division.
    std::string digits;
    digits.reserve(ps.e);
    u64 rem = a;
    for (u64 i = 0; i < ps.e; ++i) {
        u128 v = static_cast<u128>(rem) * 10;
        digits.push_back(static_cast<char>('0' + static_cast<unsigned>(v / b)));
        rem = static_cast<u64>(v % b);
    }
    ps.blocks.reserve(n);
    Int sum = 0;
    for (u64 i = 0; i < n; ++i) {
        ps.blocks.push_back(digits.substr(i * ps.l, ps.l));
        sum += ps.block_value(i);
    }

    // Residue path.
    u128 ssum = 0;
    u64 s = a % b;
    for (u64 i = 0; i < n; ++i) {
        ssum += s;
        s = mulmod(s, tl, b);
    }
    if (ssum % ps.B != 0) throw Error("InternalError", "residue sum not divisible by B");
    ps.k = static_cast<u64>(ssum / ps.B);

    // Digit path: the block sum times L is a multiple of 10^l - 1.
    Int nines = boost::multiprecision::pow(Int(10), static_cast<unsigned>(ps.l)) - 1;
    Int scaled = sum * ps.L;
    if (scaled % nines != 0 || scaled / nines != ps.k)
        throw Error("InternalError", "digit-block sum disagrees with residue sum");
    return ps;
}

// k for a = 1, b = p.
inline u64 k_statistic(u64 p, u64 n) {
    if (p <= 5 || !is_prime_u64(p)) throw Error("OutOfRange", "k_statistic needs a prime p > 5");
    return period_split(1, p, n).k;
}

}  // namespace sroot::decimal
