#pragma once

#include "sroot/numeric.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace sroot::formulas {

inline Rat M(const Rat& x) { return x > 0 ? x : Rat(0); }

// A(1,1)=1, A(n,k) = (n-k+1)A(n-1,k-1) + k A(n-1,k).
inline Int eulerian(int n, int k) {
    if (n < 1 || k < 1 || k > n) throw Error("OutOfRange", "eulerian needs 1 <= k <= n");
    std::vector<Int> row{0, 1};
    for (int m = 2; m <= n; ++m) {
        std::vector<Int> next(m + 1, 0);
        for (int j = 1; j <= m; ++j) {
            Int a = (j - 1 >= 1) ? row[j - 1] : Int(0);
            Int b = (j <= m - 1) ? row[j] : Int(0);
            next[j] = (m - j + 1) * a + j * b;
        }
        row = std::move(next);
    }
    return row[k];
}

// Limit law of the ceiling of a sum of n-1 uniforms.
inline Rat e_n(int n, int k) { return Rat(eulerian(n - 1, k), factorial(n - 1)); }

// Volume of {x in [0,1)^k : sum x_i <= x}.
inline Rat u_volume(int k, const Rat& x) {
    if (k < 1) throw Error("OutOfRange", "u_volume needs k >= 1");
    Rat s = 0;
    for (int i = 0; i <= k; ++i) {
        Rat term = Rat(binom(k, i)) * rpow(M(x - i), k);
        s += (i % 2 == 0) ? term : Rat(-term);
    }
    return s / Rat(factorial(k));
}

inline int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

// Coefficient of M(l - h a)^{n-1} in the density of r_i/p, times (n-1)!.
inline Int d_coefficient(int i, int h, int l, int n) {
    Int coeff = 0;
    for (int k = i; k <= n; ++k) {
        Int inner = 0;
        for (int m = 1; m <= n - 1; ++m) inner += binom(k, n - h - m + l) * binom(n - k, m - l);
        coeff += sign_pow(h + k + n) * binom(n, k) * inner;
    }
    return coeff;
}

// Predicted limit of #{p : r_i/p < a} / #Spl for f without nontrivial relations.
inline Rat d_closed(const Rat& a, int i, int n) {
    if (n < 2 || i < 1 || i > n || a < 0 || a >= 1) throw Error("OutOfRange", "d_closed needs n > 1, 1 <= i <= n, 0 <= a < 1");
    Rat total = 0;
    for (int h = 0; h <= n; ++h) {
        for (int l = 1; l <= n - 1; ++l) {
            Rat mpow = rpow(M(Rat(l) - h * a), n - 1);
            if (mpow == 0) continue;
            total += Rat(d_coefficient(i, h, l, n)) * mpow;
        }
    }
    return total / Rat(factorial(n - 1));
}

// d_closed(., i, n) restricted to lo < a <= hi, as a polynomial in a.
struct DensityBranch {
    Rat lo, hi;
    std::vector<Rat> coeffs;  // ascending powers of a

    Rat operator()(const Rat& a) const {
        Rat v = 0;
        for (std::size_t j = coeffs.size(); j-- > 0;) v = v * a + coeffs[j];
        return v;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t j = coeffs.size(); j-- > 0;) {
            const Rat& c = coeffs[j];
            if (c == 0) continue;
            Rat mag = c < 0 ? Rat(-c) : c;
            s += s.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            if (j == 0 || mag != 1) s += mag.str();
            if (j > 0) s += std::string(mag != 1 ? "*a" : "a") + (j > 1 ? "^" + std::to_string(j) : "");
        }
        return s.empty() ? "0" : s;
    }
};

// Breakpoints are the l/h in (0, 1); on each piece the active M terms are expanded.
inline std::vector<DensityBranch> piecewise_branches(int i, int n) {
    if (n < 2 || i < 1 || i > n) throw Error("OutOfRange", "piecewise_branches needs n > 1, 1 <= i <= n");
    std::vector<Rat> cuts{Rat(0), Rat(1)};
    for (int h = 1; h <= n; ++h)
        for (int l = 1; l <= n - 1; ++l)
            if (l < h) cuts.emplace_back(l, h);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<DensityBranch> out;
    const Rat scale = Rat(1) / Rat(factorial(n - 1));
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        DensityBranch b{cuts[c], cuts[c + 1], std::vector<Rat>(n, Rat(0))};
        for (int h = 0; h <= n; ++h)
            for (int l = 1; l <= n - 1; ++l) {
                if (h > 0 && Rat(l, h) < b.hi) continue;
                Int coeff = d_coefficient(i, h, l, n);
                if (coeff == 0) continue;
                // (l - h a)^{n-1}
                for (int j = 0; j <= n - 1; ++j)
                    b.coeffs[j] += scale * Rat(coeff * binom(n - 1, j) * ipow(Int(l), n - 1 - j) * ipow(Int(-h), j));
            }
        out.push_back(std::move(b));
    }
    return out;
}

// Coefficient of M(l - h a)^{n-1} in the i = 1 density.
inline Rat c1_coefficients(int l, int h, int n) {
    if (n < 2 || l < 1 || l > n - 1 || h < 0 || h > n) throw Error("OutOfRange", "c1_coefficients needs 1 <= l <= n-1, 0 <= h <= n");
    Int v;
    if (h == 0)
        v = sign_pow(n + l + 1) * binom(n - 1, l);
    else if (h <= l)
        v = 0;
    else
        v = sign_pow(n + h + 1) * binom(n, h);
    return Rat(v, factorial(n - 1));
}

inline Rat d_closed_first(const Rat& a, int n) {
    Rat s = 0;
    for (int h = 0; h <= n; ++h)
        for (int l = 1; l <= n - 1; ++l) s += c1_coefficients(l, h, n) * rpow(M(Rat(l) - h * a), n - 1);
    return s;
}

struct IdentityCheck {
    std::string identity;
    int n = 0;
    int param = 0;
    bool passed = false;
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Alternating binomial sums: sum_k (-1)^k k^j C(n,k), the Eulerian difference
// of U_n, and the truncated alternating row sum.
inline IdentityReport identity_suite(int n_max) {
    if (n_max < 1 || n_max > 12) throw Error("OutOfRange", "identity_suite needs 1 <= n_max <= 12");
    IdentityReport rep;
    for (int n = 1; n <= n_max; ++n) {
        for (int j = 0; j <= n; ++j) {
            Int s = 0;
            for (int k = 0; k <= n; ++k) s += sign_pow(k) * ipow(Int(k), j) * binom(n, k);
            Int expect = (j == n) ? Int(sign_pow(n) * factorial(n)) : Int(0);
            rep.checks.push_back({"alternating_power_sum", n, j, s == expect});
        }
        for (int k = 1; k <= n; ++k) {
            Rat diff = u_volume(n, Rat(k)) - u_volume(n, Rat(k - 1));
            Int s = 0;
            for (int i = 0; i <= k - 1; ++i) s += sign_pow(i) * binom(n + 1, i) * ipow(Int(k - i), n);
            Rat mid = Rat(s, factorial(n));
            Rat eul = Rat(eulerian(n, k), factorial(n));
            rep.checks.push_back({"cube_slab_eulerian", n, k, diff == mid && mid == eul});
        }
        for (int m = 0; m <= n - 1; ++m) {
            Int s = 0;
            for (int k = 0; k <= m; ++k) s += sign_pow(k) * binom(n, k);
            rep.checks.push_back({"truncated_alternating_row", n, m, s == sign_pow(m) * binom(n - 1, m)});
        }
    }
    return rep;
}

}  // namespace sroot::formulas
