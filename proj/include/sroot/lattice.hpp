#pragma once

#include "sroot/numeric.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace sroot::lattice {

inline IntMat transpose(const IntMat& a) {
    if (a.empty()) return {};
    IntMat t(a[0].size(), IntVec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline Int dot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline bool is_zero(const IntVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline void axpy(IntVec& y, const Int& a, const IntVec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

struct HnfResult {
    IntMat H;      // U * A, echelon with positive reduced pivots, zero rows last
    IntMat U;      // unimodular
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

// Row Hermite normal form with transform.
inline HnfResult hnf_with_transform(const IntMat& A) {
    HnfResult r;
    std::size_t m = A.size();
    std::size_t ncols = m ? A[0].size() : 0;
    r.H = A;
    r.U.assign(m, IntVec(m, 0));
    for (std::size_t i = 0; i < m; ++i) r.U[i][i] = 1;
    std::size_t row = 0;
    for (std::size_t c = 0; c < ncols && row < m; ++c) {
        // gcd-eliminate column c below row
        for (std::size_t i = row + 1; i < m; ++i) {
            while (r.H[i][c] != 0) {
                if (r.H[row][c] == 0) {
                    std::swap(r.H[row], r.H[i]);
                    std::swap(r.U[row], r.U[i]);
                    continue;
                }
                Int q = r.H[i][c] / r.H[row][c];
                axpy(r.H[i], -q, r.H[row]);
                axpy(r.U[i], -q, r.U[row]);
                if (r.H[i][c] != 0) {
                    std::swap(r.H[row], r.H[i]);
                    std::swap(r.U[row], r.U[i]);
                }
            }
        }
        if (r.H[row][c] == 0) continue;
        if (r.H[row][c] < 0) {
            for (auto& x : r.H[row]) x = -x;
            for (auto& x : r.U[row]) x = -x;
        }
        for (std::size_t i = 0; i < row; ++i) {
            Int q = floor_div(r.H[i][c], r.H[row][c]);
            if (q != 0) {
                axpy(r.H[i], -q, r.H[row]);
                axpy(r.U[i], -q, r.U[row]);
            }
        }
        r.pivots.push_back(c);
        ++row;
    }
    r.rank = row;
    return r;
}

// Nonzero rows of the Hermite normal form; a canonical basis of the row lattice.
inline IntMat hnf(const IntMat& A) {
    auto r = hnf_with_transform(A);
    r.H.resize(r.rank);
    return r.H;
}

// Coefficients c with c * H = v for H in Hermite form, if v lies in the lattice.
inline std::optional<IntVec> hnf_coords(const IntMat& H, IntVec v) {
    IntVec c(H.size(), 0);
    for (std::size_t i = 0; i < H.size(); ++i) {
        std::size_t p = 0;
        while (p < H[i].size() && H[i][p] == 0) ++p;
        if (p == H[i].size()) continue;
        for (std::size_t q = 0; q < p; ++q)
            if (v[q] != 0) return std::nullopt;
        if (v[p] % H[i][p] != 0) return std::nullopt;
        c[i] = v[p] / H[i][p];
        axpy(v, -c[i], H[i]);
    }
    if (!is_zero(v)) return std::nullopt;
    return c;
}

inline bool in_lattice(const IntMat& H, const IntVec& v) { return hnf_coords(H, v).has_value(); }

// Integral LLL (exact, no floating point), delta = 99/100.  Rows must be
// linearly independent.
inline IntMat lll(IntMat b) {
    const std::size_t n = b.size();
    if (n <= 1) return b;
    std::vector<Int> d(n + 1, 0);  // d[0] = 1, d[i] for i = 1..n
    std::vector<IntVec> lam(n + 1, IntVec(n + 1, 0));
    auto B = [&](std::size_t i) -> IntVec& { return b[i - 1]; };
    d[0] = 1;
    d[1] = dot(B(1), B(1));
    if (d[1] == 0) throw Error("RankDeficient", "lll needs independent rows");
    std::size_t k = 2, kmax = 1;

    auto red = [&](std::size_t kk, std::size_t l) {
        if (2 * iabs(lam[kk][l]) > d[l]) {
            Int q = floor_div(2 * lam[kk][l] + d[l], 2 * d[l]);
            axpy(B(kk), -q, B(l));
            lam[kk][l] -= q * d[l];
            for (std::size_t i = 1; i < l; ++i) lam[kk][i] -= q * lam[l][i];
        }
    };
    auto swap = [&](std::size_t kk) {
        std::swap(B(kk), B(kk - 1));
        for (std::size_t j = 1; j + 2 <= kk; ++j) std::swap(lam[kk][j], lam[kk - 1][j]);
        Int l = lam[kk][kk - 1];
        Int nb = (d[kk - 2] * d[kk] + l * l) / d[kk - 1];
        for (std::size_t i = kk + 1; i <= kmax; ++i) {
            Int t = lam[i][kk];
            lam[i][kk] = (d[kk] * lam[i][kk - 1] - l * t) / d[kk - 1];
            lam[i][kk - 1] = (nb * t + l * lam[i][kk]) / d[kk];
        }
        d[kk - 1] = nb;
    };

    while (k <= n) {
        if (k > kmax) {
            kmax = k;
            for (std::size_t j = 1; j <= k; ++j) {
                Int u = dot(B(k), B(j));
                for (std::size_t i = 1; i < j; ++i) u = (d[i] * u - lam[k][i] * lam[j][i]) / d[i - 1];
                if (j < k)
                    lam[k][j] = u;
                else
                    d[k] = u;
            }
            if (d[k] == 0) throw Error("RankDeficient", "lll needs independent rows");
        }
        red(k, k - 1);
        if (100 * d[k] * d[k - 2] < 99 * d[k - 1] * d[k - 1] - 100 * lam[k][k - 1] * lam[k][k - 1]) {
            swap(k);
            if (k > 2) --k;
        } else {
            for (std::size_t l = k - 1; l-- > 1;) red(k, l);
            ++k;
        }
    }
    return b;
}

// Basis (as rows) of {x in Z^m : A x = 0} for A with m columns, LLL-reduced.
inline IntMat integer_kernel(const IntMat& A, std::size_t m) {
    if (m == 0) return {};
    // left kernel of A^T
    IntMat At = A.empty() ? IntMat(m, IntVec{0}) : transpose(A);
    auto r = hnf_with_transform(At);
    IntMat ker;
    for (std::size_t i = r.rank; i < m; ++i) ker.push_back(r.U[i]);
    if (ker.empty()) return ker;
    return lll(ker);
}

// (span_Q rows) intersected with Z^m.
inline IntMat saturate(const IntMat& rows, std::size_t m) {
    IntMat k = integer_kernel(rows, m);
    IntMat s = integer_kernel(k, m);
    return hnf(s);
}

// Determinant by fraction-free elimination.
inline Int det(IntMat a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && a[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(a[k], a[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline IntMat gram(const IntMat& rows) {
    IntMat g(rows.size(), IntVec(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) g[i][j] = dot(rows[i], rows[j]);
    return g;
}

// Rational X with X * M = V, when M has full row rank and a solution exists.
inline std::optional<RatMat> solve_left(const IntMat& M, const IntMat& V) {
    // Solve M^T x = v^T for each row v of V by Gaussian elimination.
    const std::size_t t = M.size();
    const std::size_t m = t ? M[0].size() : 0;
    RatMat out;
    for (const auto& v : V) {
        RatMat aug(m, RatVec(t + 1));
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < t; ++c) aug[r][c] = Rat(M[c][r]);
            aug[r][t] = Rat(v[r]);
        }
        std::size_t row = 0;
        std::vector<std::size_t> piv;
        for (std::size_t c = 0; c < t && row < m; ++c) {
            std::size_t s = row;
            while (s < m && aug[s][c] == 0) ++s;
            if (s == m) continue;
            std::swap(aug[s], aug[row]);
            Rat inv = 1 / aug[row][c];
            for (auto& x : aug[row]) x *= inv;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == row || aug[i][c] == 0) continue;
                Rat f = aug[i][c];
                for (std::size_t j = 0; j <= t; ++j) aug[i][j] -= f * aug[row][j];
            }
            piv.push_back(c);
            ++row;
        }
        for (std::size_t i = row; i < m; ++i)
            if (aug[i][t] != 0) return std::nullopt;
        if (piv.size() != t) return std::nullopt;
        RatVec x(t);
        for (std::size_t i = 0; i < t; ++i) x[piv[i]] = aug[i][t];
        out.push_back(x);
    }
    return out;
}

}  // namespace sroot::lattice
