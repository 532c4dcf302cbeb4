#pragma once

#include "sroot/modarith.hpp"
#include "sroot/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sroot {

// Dense polynomial with rational coefficients, lowest degree first.
using RatPoly = std::vector<Rat>;

inline void rp_trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly rp_rem(RatPoly a, const RatPoly& b) {
    rp_trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rat q = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        rp_trim(a);
    }
    return a;
}

inline RatPoly rp_gcd(RatPoly a, RatPoly b) {
    rp_trim(a);
    rp_trim(b);
    while (!b.empty()) {
        RatPoly r = rp_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

inline RatPoly rp_mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// Monic polynomial x^n + a_{n-1} x^{n-1} + ... + a_0 over the integers.
class IntPolynomial {
public:
    IntPolynomial() = default;

    // Lower coefficients a_0..a_{n-1}; the leading 1 is implicit.
    explicit IntPolynomial(IntVec lower) : a_(std::move(lower)) {
        if (a_.empty()) throw Error("InvalidPolynomial", "degree must be at least 1");
    }

    // Full coefficient list a_0..a_n with a_n = 1.
    static IntPolynomial from_full(const IntVec& full) {
        IntVec c = full;
        while (c.size() > 1 && c.back() == 0) c.pop_back();
        if (c.size() < 2) throw Error("InvalidPolynomial", "degree must be at least 1");
        if (c.back() != 1) throw Error("InvalidPolynomial", "polynomial must be monic");
        c.pop_back();
        return IntPolynomial(std::move(c));
    }

    int degree() const { return static_cast<int>(a_.size()); }
    const IntVec& lower() const { return a_; }
    Int coeff(int i) const { return i == degree() ? Int(1) : a_.at(i); }

    IntVec full() const {
        IntVec c = a_;
        c.push_back(1);
        return c;
    }

    RatPoly as_rat() const {
        RatPoly r;
        for (const auto& c : full()) r.emplace_back(c);
        return r;
    }

    Int eval(const Int& x) const {
        Int r = 1;
        for (int i = degree() - 1; i >= 0; --i) r = r * x + a_[i];
        return r;
    }

    Rat eval(const Rat& x) const {
        Rat r = 1;
        for (int i = degree() - 1; i >= 0; --i) r = r * x + Rat(a_[i]);
        return r;
    }

    u64 eval_mod(u64 x, u64 p) const {
        u64 r = 1;
        for (int i = degree() - 1; i >= 0; --i) r = addmod(mulmod(r, x, p), mod_coeff(i, p), p);
        return r;
    }

    u64 mod_coeff(int i, u64 p) const {
        Int v = coeff(i) % Int(p);
        if (v < 0) v += p;
        return static_cast<u64>(v);
    }

    std::string to_string() const {
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            Int c = coeff(i);
            if (c == 0) continue;
            bool neg = c < 0;
            Int mag = neg ? Int(-c) : c;
            if (s.empty())
                s += neg ? "-" : "";
            else
                s += neg ? " - " : " + ";
            std::string mono = i == 0 ? "" : (i == 1 ? "x" : "x^" + std::to_string(i));
            if (i == 0)
                s += mag.str();
            else if (mag == 1)
                s += mono;
            else
                s += mag.str() + "*" + mono;
        }
        return s;
    }

    static IntPolynomial parse(std::string_view text);

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : full()) {
            if (fits_i64(c))
                arr.push_back(static_cast<std::int64_t>(c));
            else
                arr.push_back(c.str());
        }
        return arr;
    }

    static IntPolynomial from_json(const nlohmann::json& j) {
        if (j.is_string()) return parse(j.get<std::string>());
        if (!j.is_array()) throw Error("ParseError", "polynomial must be a string or coefficient array");
        IntVec full;
        for (const auto& v : j) {
            if (v.is_number_integer())
                full.emplace_back(v.get<std::int64_t>());
            else if (v.is_string())
                full.emplace_back(Int(v.get<std::string>()));
            else
                throw Error("ParseError", "coefficients must be integers");
        }
        return from_full(full);
    }

    bool operator==(const IntPolynomial& o) const { return a_ == o.a_; }

private:
    IntVec a_;
};

namespace detail {

using IPoly = IntVec;  // lowest degree first, may be non-monic during parsing

inline void ip_trim(IPoly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline IPoly ip_add(const IPoly& a, const IPoly& b, int sign) {
    IPoly r(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign * b[i];
    ip_trim(r);
    return r;
}

inline IPoly ip_mul(const IPoly& a, const IPoly& b) {
    IPoly r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    ip_trim(r);
    return r;
}

// expr := ['+'|'-'] term (('+'|'-') term)*
// term := factor (['*'] factor)*
// factor := primary ['^' integer]
// primary := integer | 'x' | '(' expr ')'
class Parser {
public:
    explicit Parser(std::string_view s) {
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
    }

    IPoly parse() {
        IPoly r = expr();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    std::string s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error("ParseError", msg + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
    }
    bool at(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

    IPoly expr() {
        int sign = 1;
        if (at('+')) ++pos_;
        else if (at('-')) {
            sign = -1;
            ++pos_;
        }
        IPoly r = ip_add(IPoly{0}, term(), sign);
        while (at('+') || at('-')) {
            int sg = at('+') ? 1 : -1;
            ++pos_;
            r = ip_add(r, term(), sg);
        }
        return r;
    }

    IPoly term() {
        IPoly r = factor();
        while (true) {
            if (at('*')) {
                ++pos_;
                r = ip_mul(r, factor());
            } else if (at('x') || at('(') || (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))) {
                r = ip_mul(r, factor());
            } else {
                break;
            }
        }
        return r;
    }

    IPoly factor() {
        IPoly base = primary();
        if (at('^')) {
            ++pos_;
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (st == pos_) fail("expected exponent");
            int e = std::stoi(s_.substr(st, pos_ - st));
            IPoly r{1};
            for (int i = 0; i < e; ++i) r = ip_mul(r, base);
            return r;
        }
        return base;
    }

    IPoly primary() {
        if (at('x')) {
            ++pos_;
            return IPoly{0, 1};
        }
        if (at('(')) {
            ++pos_;
            IPoly r = expr();
            if (!at(')')) fail("expected ')'");
            ++pos_;
            return r;
        }
        std::size_t st = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (st == pos_) fail("expected number, 'x' or '('");
        return IPoly{Int(s_.substr(st, pos_ - st))};
    }
};

}  // namespace detail

inline IntPolynomial IntPolynomial::parse(std::string_view text) {
    detail::Parser p(text);
    return from_full(p.parse());
}

inline RatPoly derivative(const RatPoly& p) {
    RatPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat(static_cast<long>(i)));
    return d;
}

inline bool is_squarefree(const IntPolynomial& f) {
    RatPoly g = rp_gcd(f.as_rat(), derivative(f.as_rat()));
    return g.size() == 1;
}

// Cauchy bound 1 + max |a_i|.
inline Rat root_magnitude_bound(const IntPolynomial& f) {
    Int m = 0;
    for (const auto& c : f.lower()) m = std::max(m, iabs(c));
    return Rat(m + 1);
}

struct QuarticDecomposition {
    RatPoly g;  // y^2 + B y + C
    RatPoly h;  // x^2 + (a3/2) x
};

inline RatPoly compose(const RatPoly& g, const RatPoly& h) {
    RatPoly r{g.back()};
    for (std::size_t i = g.size() - 1; i-- > 0;) {
        r = rp_mul(r, h);
        if (r.empty()) r.push_back(0);
        r[0] += g[i];
    }
    rp_trim(r);
    return r;
}

inline std::optional<QuarticDecomposition> quartic_decomposable(const IntPolynomial& f) {
    if (f.degree() != 4) throw Error("WrongDegree", "quartic_decomposable needs degree 4");
    Rat a0(f.coeff(0)), a1(f.coeff(1)), a2(f.coeff(2)), a3(f.coeff(3));
    if (8 * a1 != a3 * (4 * a2 - a3 * a3)) return std::nullopt;
    QuarticDecomposition d;
    d.h = {Rat(0), a3 / 2, Rat(1)};
    d.g = {a0, a2 - a3 * a3 / 4, Rat(1)};
    RatPoly back = compose(d.g, d.h);
    if (back != f.as_rat()) return std::nullopt;
    return d;
}

// Integer roots, ascending.
inline std::vector<Int> rational_roots(const IntPolynomial& f) {
    std::vector<Int> roots;
    IntVec full = f.full();
    int zeros = 0;
    while (zeros < static_cast<int>(full.size()) - 1 && full[zeros] == 0) ++zeros;
    if (zeros > 0) roots.push_back(0);
    Int c0 = iabs(full[zeros]);
    if (zeros == static_cast<int>(full.size()) - 1) return roots;
    if (!fits_i64(c0)) throw Error("OutOfRange", "constant term too large for divisor enumeration");
    std::vector<u64> divs{1};
    for (auto [p, e] : factorize(static_cast<u64>(c0))) {
        std::size_t cur = divs.size();
        u64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < cur; ++i) divs.push_back(divs[i] * pk);
        }
    }
    for (u64 d : divs) {
        for (int sg : {1, -1}) {
            Int x = sg * Int(d);
            if (f.eval(x) == 0) roots.push_back(x);
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Axis-aligned complex box holding exactly one root.
struct RootEnclosure {
    Rat re_lo, re_hi, im_lo, im_hi;
    int index = 0;  // 1-based canonical index

    Rat re_mid() const { return (re_lo + re_hi) / 2; }
    Rat im_mid() const { return (im_lo + im_hi) / 2; }
    Rat width() const { return std::max(re_hi - re_lo, im_hi - im_lo); }
    std::complex<double> approx() const {
        return {static_cast<double>(re_mid()), static_cast<double>(im_mid())};
    }
    bool contains(const RootEnclosure& o) const {
        return re_lo <= o.re_lo && o.re_hi <= re_hi && im_lo <= o.im_lo && o.im_hi <= im_hi;
    }
    bool intersects(const RootEnclosure& o) const {
        return !(o.re_hi < re_lo || re_hi < o.re_lo || o.im_hi < im_lo || im_hi < o.im_lo);
    }
};

namespace detail {

// Gaussian integer scaled by 2^-W.
struct Fx {
    Int re, im;
};

inline Int shr(const Int& a, unsigned s) {
    // floor division by 2^s
    return a >= 0 ? Int(a >> s) : Int(-((-a + ((Int(1) << s) - 1)) >> s));
}

inline Fx fx_mul(const Fx& a, const Fx& b, unsigned W) {
    return {shr(a.re * b.re - a.im * b.im, W), shr(a.re * b.im + a.im * b.re, W)};
}

inline Fx fx_div(const Fx& a, const Fx& b, unsigned W) {
    Int den = b.re * b.re + b.im * b.im;
    Int nr = (a.re * b.re + a.im * b.im) << W;
    Int ni = (a.im * b.re - a.re * b.im) << W;
    return {nr / den, ni / den};
}

inline Fx fx_from_double(std::complex<long double> z, unsigned W) {
    long double sr = std::ldexp(z.real(), 60), si = std::ldexp(z.imag(), 60);
    Int r(static_cast<long long>(std::llround(sr))), i(static_cast<long long>(std::llround(si)));
    if (W >= 60) return {r << (W - 60), i << (W - 60)};
    return {shr(r, 60 - W), shr(i, 60 - W)};
}

inline Fx fx_rescale(const Fx& z, unsigned from, unsigned to) {
    if (to >= from) return {z.re << (to - from), z.im << (to - from)};
    return {shr(z.re, from - to), shr(z.im, from - to)};
}

inline Int isqrt_ceil(const Int& v) {
    if (v <= 0) return 0;
    Int r = boost::multiprecision::sqrt(v);
    if (r * r < v) r += 1;
    return r;
}

inline std::vector<std::complex<long double>> aberth_start(const IntPolynomial& f) {
    using C = std::complex<long double>;
    int n = f.degree();
    std::vector<long double> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = static_cast<long double>(f.coeff(i));
    long double R = static_cast<long double>(root_magnitude_bound(f));
    std::vector<C> z(n);
    for (int i = 0; i < n; ++i) {
        long double ang = 2.0L * 3.14159265358979323846L * (i + 0.25L) / n + 0.4L;
        z[i] = std::polar(R * 0.5L + 0.1L, ang);
    }
    auto evald = [&](C x, C& d) {
        C v = 1, dv = 0;
        for (int i = n - 1; i >= 0; --i) {
            dv = dv * x + v;
            v = v * x + c[i];
        }
        d = dv;
        return v;
    };
    for (int it = 0; it < 500; ++it) {
        long double maxstep = 0;
        for (int i = 0; i < n; ++i) {
            C d;
            C v = evald(z[i], d);
            if (v == C(0)) continue;
            C ratio = v / d;
            C s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += C(1) / (z[i] - z[j]);
            C w = ratio / (C(1) - ratio * s);
            z[i] -= w;
            maxstep = std::max(maxstep, std::abs(w));
        }
        if (maxstep < 1e-17L) break;
    }
    return z;
}

// Weierstrass iteration at W fractional bits.
inline void weierstrass(const IntPolynomial& f, std::vector<Fx>& z, unsigned W, int max_iter) {
    int n = f.degree();
    std::vector<Int> cs(n + 1);
    for (int i = 0; i <= n; ++i) cs[i] = f.coeff(i) << W;
    Int tol = Int(1) << (W / 2 > 8 ? 8 : 0);
    for (int it = 0; it < max_iter; ++it) {
        Int maxstep = 0;
        for (int i = 0; i < n; ++i) {
            Fx v{cs[n], 0};
            for (int k = n - 1; k >= 0; --k) {
                v = fx_mul(v, z[i], W);
                v.re += cs[k];
            }
            Fx prod{Int(1) << W, 0};
            for (int j = 0; j < n; ++j)
                if (j != i) prod = fx_mul(prod, Fx{z[i].re - z[j].re, z[i].im - z[j].im}, W);
            if (prod.re == 0 && prod.im == 0) throw Error("PrecisionExhausted", "coincident iterates");
            Fx w = fx_div(v, prod, W);
            z[i].re -= w.re;
            z[i].im -= w.im;
            maxstep = std::max(maxstep, std::max(iabs(w.re), iabs(w.im)));
        }
        if (maxstep <= tol) break;
    }
}

// Certified disks of radius n|W_i| around the iterates; fails if they overlap
// or are wider than 2^-Q.
inline std::optional<std::vector<RootEnclosure>> certify_level(const IntPolynomial& f, const std::vector<Fx>& z, unsigned W,
                                                               unsigned Q) {
    const unsigned S = 32;
    int n = f.degree();
    std::vector<Int> R(n);
    for (int i = 0; i < n; ++i) {
        // F = f(z) * 2^{nW}
        Fx F{Int(1), Int(0)};
        for (int k = n - 1; k >= 0; --k) {
            Fx t{F.re * z[i].re - F.im * z[i].im, F.re * z[i].im + F.im * z[i].re};
            t.re += f.coeff(k) << (static_cast<unsigned>(n - k) * W);
            F = t;
        }
        Fx P{Int(1), Int(0)};
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Int dr = z[i].re - z[j].re, di = z[i].im - z[j].im;
            P = Fx{P.re * dr - P.im * di, P.re * di + P.im * dr};
        }
        Int pn = P.re * P.re + P.im * P.im;
        if (pn == 0) return std::nullopt;
        Int fn = F.re * F.re + F.im * F.im;
        Int num = Int(n) * n * fn << (2 * S);
        Int q = num / pn;
        if (q * pn < num) q += 1;
        R[i] = isqrt_ceil(q);
    }
    // radius_i <= R_i * 2^-(W+S)
    Int limit = Int(1) << (W + S - Q - 1);
    for (int i = 0; i < n; ++i)
        if (R[i] > limit) return std::nullopt;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Int dr = z[i].re - z[j].re, di = z[i].im - z[j].im;
            Int d2 = (dr * dr + di * di) << (2 * S);
            Int rs = R[i] + R[j];
            if (d2 <= rs * rs) return std::nullopt;
        }
    std::vector<RootEnclosure> out(n);
    Int den = Int(1) << (W + S);
    for (int i = 0; i < n; ++i) {
        Int cr = z[i].re << S, ci = z[i].im << S;
        out[i].re_lo = Rat(cr - R[i], den);
        out[i].re_hi = Rat(cr + R[i], den);
        out[i].im_lo = Rat(ci - R[i], den);
        out[i].im_hi = Rat(ci + R[i], den);
    }
    return out;
}

inline bool canonical_less(const RootEnclosure& a, const RootEnclosure& b) {
    bool re_overlap = !(a.re_hi < b.re_lo || b.re_hi < a.re_lo);
    if (!re_overlap) return a.re_mid() < b.re_mid();
    return a.im_mid() < b.im_mid();
}

}  // namespace detail

// Certified root boxes with a fixed numbering: alpha_i is the canonical root
// numbering[i-1] (1-based canonical index).
class RootSet {
public:
    RootSet() = default;
    RootSet(IntPolynomial f, std::vector<RootEnclosure> canon, unsigned precision)
        : f_(std::move(f)), canon_(std::move(canon)), precision_(precision) {
        numbering_.resize(canon_.size());
        for (std::size_t i = 0; i < canon_.size(); ++i) numbering_[i] = static_cast<int>(i) + 1;
    }

    const IntPolynomial& poly() const { return f_; }
    int degree() const { return f_.degree(); }
    unsigned precision() const { return precision_; }
    const std::vector<RootEnclosure>& canonical() const { return canon_; }
    const std::vector<int>& numbering() const { return numbering_; }

    // alpha_i, 1-based.
    const RootEnclosure& alpha(int i) const { return canon_.at(numbering_.at(i - 1) - 1); }
    std::complex<double> approx(int i) const { return alpha(i).approx(); }

    RootSet with_numbering(std::vector<int> numbering) const {
        std::vector<int> chk = numbering;
        std::sort(chk.begin(), chk.end());
        for (std::size_t i = 0; i < chk.size(); ++i)
            if (chk[i] != static_cast<int>(i) + 1 || chk.size() != canon_.size())
                throw Error("InvalidNumbering", "numbering must be a permutation of 1..n");
        RootSet r = *this;
        r.numbering_ = std::move(numbering);
        return r;
    }

    // Numbering whose alpha_i is the canonical root nearest to values[i-1].
    RootSet numbered_like(const std::vector<std::complex<double>>& values) const {
        if (values.size() != canon_.size()) throw Error("InvalidNumbering", "need one value per root");
        std::vector<int> num;
        for (const auto& v : values) {
            int best = -1;
            double bd = 0;
            for (std::size_t c = 0; c < canon_.size(); ++c) {
                double d = std::abs(canon_[c].approx() - v);
                if (best < 0 || d < bd) {
                    best = static_cast<int>(c);
                    bd = d;
                }
            }
            num.push_back(best + 1);
        }
        return with_numbering(num);
    }

    RootSet refine(unsigned precision) const;

private:
    IntPolynomial f_;
    std::vector<RootEnclosure> canon_;
    std::vector<int> numbering_;
    unsigned precision_ = 0;
};

// Precision levels are 64, 128, 256, ... up to the first level >= P; the
// returned boxes are the intersection over all levels, so a higher request
// always nests inside a lower one.
inline RootSet complex_roots(const IntPolynomial& f, unsigned precision_bits) {
    if (precision_bits < 64) throw Error("OutOfRange", "precision_bits must be at least 64");
    if (!is_squarefree(f)) throw Error("NonSquarefree", f.to_string() + " has a repeated root");
    int n = f.degree();
    std::vector<RootEnclosure> acc;
    if (n == 1) {
        Rat r(-f.coeff(0));
        acc.push_back({r, r, Rat(0), Rat(0), 1});
        return RootSet(f, acc, precision_bits);
    }
    auto start = detail::aberth_start(f);
    unsigned W_prev = 64;
    std::vector<detail::Fx> z;
    for (const auto& s : start) z.push_back(detail::fx_from_double(s, W_prev));

    for (unsigned Q = 64;; Q *= 2) {
        std::optional<std::vector<RootEnclosure>> boxes;
        unsigned extra = 64 + 4 * static_cast<unsigned>(n);
        for (int attempt = 0; attempt < 6 && !boxes; ++attempt, extra *= 2) {
            unsigned W = Q + extra;
            z = [&] {
                std::vector<detail::Fx> zz;
                for (const auto& v : z) zz.push_back(detail::fx_rescale(v, W_prev, W));
                return zz;
            }();
            W_prev = W;
            detail::weierstrass(f, z, W, 200 + 4 * static_cast<int>(std::log2(static_cast<double>(W))));
            boxes = detail::certify_level(f, z, W, Q);
        }
        if (!boxes) throw Error("PrecisionExhausted", "root disks did not separate at " + std::to_string(Q) + " bits");
        if (acc.empty()) {
            acc = *boxes;
        } else {
            std::vector<RootEnclosure> next(n);
            std::vector<detail::Fx> zs(n);
            std::vector<char> used(n, 0);
            for (int i = 0; i < n; ++i) {
                int hit = -1;
                for (int j = 0; j < n; ++j) {
                    if (!acc[j].intersects((*boxes)[i])) continue;
                    if (hit >= 0) throw Error("PrecisionExhausted", "ambiguous box match between levels");
                    hit = j;
                }
                if (hit < 0 || used[hit]) throw Error("PrecisionExhausted", "box match failed between levels");
                used[hit] = 1;
                const auto& a = acc[hit];
                const auto& b = (*boxes)[i];
                next[hit] = {std::max(a.re_lo, b.re_lo), std::min(a.re_hi, b.re_hi), std::max(a.im_lo, b.im_lo),
                             std::min(a.im_hi, b.im_hi), 0};
                zs[hit] = z[i];
            }
            acc = std::move(next);
            z = std::move(zs);
        }
        if (Q >= precision_bits) break;
    }
    std::sort(acc.begin(), acc.end(), detail::canonical_less);
    for (int i = 0; i < n; ++i) acc[i].index = i + 1;
    return RootSet(f, acc, precision_bits);
}

inline RootSet RootSet::refine(unsigned precision) const {
    RootSet r = complex_roots(f_, std::max(precision, precision_));
    return r.with_numbering(numbering_);
}

}  // namespace sroot
