#pragma once

#include "sroot/modarith.hpp"
#include "sroot/poly.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sroot {

struct SortedRootVector {
    u64 p = 0;
    std::vector<u64> roots;  // ascending, each in [0, p)

    bool operator==(const SortedRootVector& o) const { return p == o.p && roots == o.roots; }
};

// x mod p via a precomputed reciprocal; valid for any 64-bit x.
struct Barrett {
    u64 p = 1;
    u64 m = 0;  // floor(2^64 / p)
    Barrett() = default;
    explicit Barrett(u64 pp) : p(pp), m(static_cast<u64>((static_cast<u128>(1) << 64) / pp)) {}
    u64 reduce(u64 x) const {
        u64 q = static_cast<u64>((static_cast<u128>(x) * m) >> 64);
        u64 r = x - q * p;
        return r >= p ? r - p : r;
    }
};

// Arithmetic in F_p[x] / (g) for monic g.  Coefficients low-first, reduced.
class ModPolyRing {
public:
    using Poly = std::vector<u64>;
    static constexpr int kMaxFast = 24;

    ModPolyRing(Poly monic_g, u64 p) : g_(std::move(monic_g)), p_(p), n_(static_cast<int>(g_.size()) - 1), bar_(p) {
        // p < 2^28 keeps n products plus n reduction terms below 2^64
        fast_ = p_ < (u64(1) << 28) && n_ <= kMaxFast;
        neg_.resize(n_);
        for (int i = 0; i < n_; ++i) neg_[i] = g_[i] == 0 ? 0 : p_ - g_[i];
    }

    int degree() const { return n_; }
    u64 prime() const { return p_; }

    Poly mul(const Poly& a, const Poly& b) const {
        if (n_ == 0) return {};
        Poly out(n_);
        if (fast_) {
            mul_fast(a.data(), b.data(), out.data());
            return out;
        }
        std::vector<u64> r(2 * n_ - 1, 0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r[i + j] = addmod(r[i + j], mulmod(a[i], b[j], p_), p_);
        for (int k = 2 * n_ - 2; k >= n_; --k) {
            u64 c = r[k];
            if (c == 0) continue;
            for (int i = 0; i < n_; ++i) r[k - n_ + i] = addmod(r[k - n_ + i], mulmod(c, neg_[i], p_), p_);
        }
        r.resize(n_);
        return r;
    }

    // a * x
    Poly mul_x(const Poly& a) const {
        Poly r(n_, 0);
        u64 top = a[n_ - 1];
        for (int i = n_ - 1; i >= 1; --i) r[i] = a[i - 1];
        r[0] = 0;
        if (top)
            for (int i = 0; i < n_; ++i) r[i] = addmod(r[i], mulmod(top, neg_[i], p_), p_);
        return r;
    }

    Poly reduce(Poly a) const {
        for (auto& v : a) v %= p_;
        for (int k = static_cast<int>(a.size()) - 1; k >= n_; --k) {
            u64 c = a[k];
            if (c == 0) continue;
            for (int i = 0; i < n_; ++i) a[k - n_ + i] = addmod(a[k - n_ + i], mulmod(c, neg_[i], p_), p_);
        }
        a.resize(n_, 0);
        return a;
    }

    Poly x_pow(u64 e) const {
        if (n_ == 1) return {powmod(neg_[0], e, p_)};
        int top = 63;
        while (top > 0 && !((e >> top) & 1)) --top;
        if (fast_) {
            u64 r[kMaxFast] = {0}, t[kMaxFast];
            r[0] = 1;
            for (int bit = top; bit >= 0; --bit) {
                mul_fast(r, r, t);
                if ((e >> bit) & 1)
                    shift_fast(t, r);
                else
                    std::copy(t, t + n_, r);
            }
            return Poly(r, r + n_);
        }
        Poly r(n_, 0);
        r[0] = 1 % p_;
        for (int bit = top; bit >= 0; --bit) {
            r = mul(r, r);
            if ((e >> bit) & 1) r = mul_x(r);
        }
        return r;
    }

    Poly pow(Poly base, u64 e) const {
        if (fast_) {
            u64 r[kMaxFast] = {0}, b[kMaxFast], t[kMaxFast];
            r[0] = 1;
            std::copy(base.begin(), base.end(), b);
            while (e) {
                if (e & 1) {
                    mul_fast(r, b, t);
                    std::copy(t, t + n_, r);
                }
                e >>= 1;
                if (e) {
                    mul_fast(b, b, t);
                    std::copy(t, t + n_, b);
                }
            }
            return Poly(r, r + n_);
        }
        Poly r(n_, 0);
        r[0] = 1 % p_;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

private:
    void mul_fast(const u64* a, const u64* b, u64* out) const {
        u64 r[2 * kMaxFast];
        const int w = 2 * n_ - 1;
        for (int k = 0; k < w; ++k) r[k] = 0;
        for (int i = 0; i < n_; ++i) {
            u64 ai = a[i];
            if (ai == 0) continue;
            for (int j = 0; j < n_; ++j) r[i + j] += ai * b[j];
        }
        for (int k = w - 1; k >= n_; --k) {
            u64 c = bar_.reduce(r[k]);
            if (c == 0) continue;
            for (int i = 0; i < n_; ++i) r[k - n_ + i] += c * neg_[i];
        }
        for (int i = 0; i < n_; ++i) out[i] = bar_.reduce(r[i]);
    }

    // out = a * x
    void shift_fast(const u64* a, u64* out) const {
        u64 top = a[n_ - 1];
        for (int i = n_ - 1; i >= 1; --i) out[i] = a[i - 1];
        out[0] = 0;
        if (top)
            for (int i = 0; i < n_; ++i) out[i] = bar_.reduce(out[i] + top * neg_[i]);
    }

    Poly g_;
    u64 p_;
    int n_;
    Barrett bar_;
    bool fast_;
    Poly neg_;
};

namespace fp {

using Poly = std::vector<u64>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly make_monic(Poly a, u64 p) {
    trim(a);
    if (a.empty()) return a;
    u64 inv = invmod(a.back(), p);
    for (auto& v : a) v = mulmod(v, inv, p);
    return a;
}

inline Poly rem(Poly a, const Poly& b, u64 p) {
    trim(a);
    u64 inv = invmod(b.back(), p);
    while (a.size() >= b.size() && !a.empty()) {
        u64 q = mulmod(a.back(), inv, p);
        std::size_t s = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[s + i] = submod(a[s + i], mulmod(q, b[i], p), p);
        trim(a);
    }
    return a;
}

inline Poly divide(Poly a, const Poly& b, u64 p) {
    trim(a);
    u64 inv = invmod(b.back(), p);
    if (a.size() < b.size()) return {};
    Poly q(a.size() - b.size() + 1, 0);
    while (a.size() >= b.size() && !a.empty()) {
        u64 c = mulmod(a.back(), inv, p);
        std::size_t s = a.size() - b.size();
        q[s] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[s + i] = submod(a[s + i], mulmod(c, b[i], p), p);
        trim(a);
    }
    return q;
}

inline Poly gcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

inline Poly derivative(const Poly& a, u64 p) {
    Poly d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(mulmod(a[i], i % p, p));
    trim(d);
    return d;
}

}  // namespace fp

inline std::vector<u64> poly_mod_p(const IntPolynomial& f, u64 p) {
    std::vector<u64> g(f.degree() + 1);
    for (int i = 0; i <= f.degree(); ++i) g[i] = f.mod_coeff(i, p);
    return g;
}

// Primes at or below this bound are never surveyed.
inline u64 exclusion_bound(const IntPolynomial& f) {
    Int b = rfloor(root_magnitude_bound(f));
    Int m = std::max(Int(f.degree()), b);
    if (!fits_i64(m)) throw Error("OutOfRange", "coefficients too large");
    return static_cast<u64>(m);
}

inline bool has_repeated_root_mod(const IntPolynomial& f, u64 p) {
    auto g = poly_mod_p(f, p);
    auto d = fp::derivative(g, p);
    if (d.empty()) return true;
    return fp::gcd(g, d, p).size() > 1;
}

// x^p == x in F_p[x]/(f).
inline bool is_fully_split(const IntPolynomial& f, u64 p) {
    if (f.degree() > static_cast<int>(p)) return false;
    ModPolyRing ring(poly_mod_p(f, p), p);
    auto r = ring.x_pow(p);
    std::vector<u64> x(f.degree(), 0);
    if (f.degree() == 1)
        x[0] = ring.reduce({0, 1})[0];
    else
        x[1] = 1;
    return r == x;
}

namespace detail {

inline void edf(const std::vector<u64>& g, u64 p, std::vector<u64>& out) {
    int d = static_cast<int>(g.size()) - 1;
    if (d == 0) return;
    if (d == 1) {
        out.push_back(g[0] == 0 ? 0 : p - g[0]);
        return;
    }
    if (d == 2 && p > 2) {
        // x = (-b +- sqrt(b^2 - 4c)) / 2
        u64 b = g[1], c = g[0];
        u64 disc = submod(mulmod(b, b, p), mulmod(4 % p, c, p), p);
        u64 r = sqrt_mod(disc, p);
        u64 inv2 = (p + 1) / 2;
        u64 nb = b == 0 ? 0 : p - b;
        out.push_back(mulmod(addmod(nb, r, p), inv2, p));
        out.push_back(mulmod(submod(nb, r, p), inv2, p));
        return;
    }
    ModPolyRing ring(g, p);
    for (u64 a = 0;; ++a) {
        std::vector<u64> base(d, 0);
        base[0] = a % p;
        base[1] = 1;
        auto h = ring.pow(ring.reduce(base), (p - 1) / 2);
        h[0] = submod(h[0], 1, p);
        auto c = fp::gcd(g, h, p);
        int dc = static_cast<int>(c.size()) - 1;
        if (dc > 0 && dc < d) {
            edf(c, p, out);
            edf(fp::divide(g, c, p), p, out);
            return;
        }
        if (a > 4 * p + 64) throw Error("NotSplit", "equal-degree splitting failed");
    }
}

}  // namespace detail

inline SortedRootVector sorted_roots(const IntPolynomial& f, u64 p) {
    SortedRootVector v;
    v.p = p;
    int n = f.degree();
    if (p <= 1000) {
        for (u64 r = 0; r < p; ++r)
            if (f.eval_mod(r, p) == 0) v.roots.push_back(r);
        if (static_cast<int>(v.roots.size()) != n || has_repeated_root_mod(f, p))
            throw Error("NotSplit", f.to_string() + " does not split into distinct factors mod " + std::to_string(p));
        return v;
    }
    if (!is_fully_split(f, p)) throw Error("NotSplit", f.to_string() + " does not split mod " + std::to_string(p));
    detail::edf(poly_mod_p(f, p), p, v.roots);
    std::sort(v.roots.begin(), v.roots.end());
    return v;
}

namespace detail {

// Roots of an f already known to split mod p.
inline SortedRootVector split_roots_unchecked(const IntPolynomial& f, u64 p) {
    if (p <= 1000) return sorted_roots(f, p);
    SortedRootVector v;
    v.p = p;
    edf(poly_mod_p(f, p), p, v.roots);
    std::sort(v.roots.begin(), v.roots.end());
    return v;
}

}  // namespace detail

// Split primes in (start, end] above the exclusion bound, ascending.
class SplitPrimeStream {
public:
    SplitPrimeStream(IntPolynomial f, u64 start, u64 end, std::set<u64> skip = {})
        : f_(std::move(f)), skip_(std::move(skip)), sieve_(std::max(start, exclusion_bound(f_)), end) {}

    std::optional<SortedRootVector> next() {
        while (true) {
            if (pos_ >= batch_.size()) {
                if (!sieve_.next_batch(batch_)) return std::nullopt;
                pos_ = 0;
            }
            u64 p = batch_[pos_++];
            if (skip_.count(p)) continue;
            if (p <= 1000) {
                if (has_repeated_root_mod(f_, p)) continue;
                int cnt = 0;
                for (u64 r = 0; r < p; ++r) cnt += f_.eval_mod(r, p) == 0;
                if (cnt != f_.degree()) continue;
            } else if (!is_fully_split(f_, p)) {
                continue;
            }
            return detail::split_roots_unchecked(f_, p);
        }
    }

    std::vector<SortedRootVector> collect() {
        std::vector<SortedRootVector> all;
        while (auto v = next()) all.push_back(std::move(*v));
        return all;
    }

private:
    IntPolynomial f_;
    std::set<u64> skip_;
    SegmentedSieve sieve_;
    std::vector<u64> batch_;
    std::size_t pos_ = 0;
};

inline u64 smallest_split_prime_above(const IntPolynomial& f, u64 bound) {
    u64 lo = bound;
    u64 width = 1 << 14;
    while (true) {
        SplitPrimeStream s(f, lo, lo + width);
        if (auto v = s.next()) return v->p;
        lo += width;
        width *= 2;
    }
}

struct SplitDensity {
    Rat density;
    u64 split = 0, primes = 0;
    u64 degree_estimate = 0;
};

inline SplitDensity split_density(const IntPolynomial& f, u64 X) {
    if (X < 100) throw Error("OutOfRange", "split_density needs X >= 100");
    SplitDensity d;
    d.primes = primes_in(0, X).size();
    SplitPrimeStream s(f, 0, X);
    while (s.next()) ++d.split;
    d.density = Rat(Int(d.split), Int(d.primes));
    if (d.split > 0) {
        Rat inv = Rat(Int(d.primes), Int(d.split));
        d.degree_estimate = static_cast<u64>(rfloor(inv + Rat(1, 2)));
    }
    return d;
}

// Binary record file: "SPLR", u32 version, u32 n, u32 reserved, then per prime
// little-endian u64 p followed by n u64 roots.
namespace cache {

inline constexpr std::uint32_t kVersion = 1;

inline void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ostream& os, u64 v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline bool get_u32(std::istream& is, std::uint32_t& v) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
    v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return true;
}

inline bool get_u64(std::istream& is, u64& v) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
    v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return true;
}

inline void write(const std::string& path, int n, const std::vector<SortedRootVector>& recs) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("IOError", "cannot open cache " + path);
    os.write("SPLR", 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(n));
    put_u32(os, 0);
    for (const auto& r : recs) {
        put_u64(os, r.p);
        for (u64 v : r.roots) put_u64(os, v);
    }
    if (!os) throw Error("IOError", "cache write failed " + path);
}

inline std::vector<SortedRootVector> read(const std::string& path, int n) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("IOError", "cannot open cache " + path);
    char magic[4];
    std::uint32_t version = 0, nn = 0, reserved = 0;
    if (!is.read(magic, 4) || std::memcmp(magic, "SPLR", 4) != 0) throw Error("IOError", "bad cache magic");
    if (!get_u32(is, version) || version != kVersion) throw Error("IOError", "unsupported cache version");
    if (!get_u32(is, nn) || static_cast<int>(nn) != n) throw Error("IOError", "cache degree mismatch");
    get_u32(is, reserved);
    std::vector<SortedRootVector> out;
    u64 p;
    while (get_u64(is, p)) {
        SortedRootVector r;
        r.p = p;
        r.roots.resize(n);
        for (auto& v : r.roots)
            if (!get_u64(is, v)) throw Error("IOError", "truncated cache record");
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace cache

}  // namespace sroot
