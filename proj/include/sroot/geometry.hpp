#pragma once

#include "sroot/groups.hpp"
#include "sroot/lattice.hpp"
#include "sroot/modarith.hpp"
#include "sroot/numeric.hpp"
#include "sroot/relations.hpp"

#include <json.hpp>

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sroot {

// q * sqrt(g), g squarefree and positive; g = 1 when q = 0.
class SurdValue {
public:
    SurdValue() = default;
    SurdValue(Rat q, Int g = 1) : q_(std::move(q)), g_(std::move(g)) { canonicalize(); }

    static SurdValue sqrt_of(const Int& n) { return SurdValue(Rat(1), n); }

    const Rat& q() const { return q_; }
    const Int& g() const { return g_; }
    bool is_zero() const { return q_ == 0; }

    SurdValue operator*(const SurdValue& o) const { return SurdValue(q_ * o.q_, g_ * o.g_); }
    SurdValue operator/(const Rat& r) const { return SurdValue(q_ / r, g_); }
    SurdValue operator*(const Rat& r) const { return SurdValue(q_ * r, g_); }

    SurdValue operator+(const SurdValue& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        if (g_ != o.g_) throw Error("MixedRadicands", to_string() + " + " + o.to_string());
        return SurdValue(q_ + o.q_, g_);
    }
    SurdValue& operator+=(const SurdValue& o) { return *this = *this + o; }

    bool operator==(const SurdValue& o) const { return q_ == o.q_ && g_ == o.g_; }
    bool operator!=(const SurdValue& o) const { return !(*this == o); }

    // exact ordering by sign and squares
    bool operator<(const SurdValue& o) const {
        int s1 = sign(), s2 = o.sign();
        if (s1 != s2) return s1 < s2;
        Rat a = q_ * q_ * g_, b = o.q_ * o.q_ * o.g_;
        return s1 >= 0 ? a < b : a > b;
    }

    int sign() const { return q_ > 0 ? 1 : (q_ < 0 ? -1 : 0); }

    // Ratio of two values with the same radicand.
    Rat ratio(const SurdValue& den) const {
        if (is_zero()) return 0;
        if (den.is_zero()) throw Error("DivisionByZero", "ratio by zero volume");
        if (g_ != den.g_) throw Error("MixedRadicands", to_string() + " / " + den.to_string());
        return q_ / den.q_;
    }

    double to_double() const { return static_cast<double>(q_) * std::sqrt(static_cast<double>(g_)); }

    std::string to_string() const {
        std::string s = q_.str();
        if (g_ != 1) s += "*sqrt(" + g_.str() + ")";
        return s;
    }

    nlohmann::json to_json() const { return {{"q", q_.str()}, {"g", fits_i64(g_) ? nlohmann::json(static_cast<long long>(g_)) : nlohmann::json(g_.str())}}; }

    static SurdValue from_json(const nlohmann::json& j) {
        Int g = j.at("g").is_string() ? Int(j.at("g").get<std::string>()) : Int(j.at("g").get<long long>());
        return SurdValue(parse_rat(j.at("q").get<std::string>()), g);
    }

private:
    void canonicalize() {
        if (g_ <= 0) {
            if (g_ == 0) {
                q_ = 0;
                g_ = 1;
                return;
            }
            throw Error("OutOfRange", "negative radicand");
        }
        if (q_ == 0) {
            g_ = 1;
            return;
        }
        auto [s, r] = square_split(g_);
        q_ *= s;
        g_ = r;
    }

    // n = s^2 * r with r squarefree
    static std::pair<Int, Int> square_split(Int n) {
        Int s = 1, r = 1;
        if (n <= Int(std::numeric_limits<u64>::max())) {
            for (auto [p, e] : factorize(static_cast<u64>(n))) {
                for (int i = 0; i + 1 < e; i += 2) s *= p;
                if (e % 2) r *= p;
            }
            return {s, r};
        }
        for (u64 p = 2; p < 1000000 && Int(p) * p <= n; ++p) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            for (int i = 0; i + 1 < e; i += 2) s *= p;
            if (e % 2) r *= p;
        }
        // the cofactor has at most a square of one large prime worth extracting
        Int root = boost::multiprecision::sqrt(n);
        if (root * root == n && n > 1) {
            s *= root;
        } else {
            r *= n;
        }
        return {s, r};
    }

    Rat q_ = 0;
    Int g_ = 1;
};

namespace geom {

// a . y <= b
struct Halfspace {
    RatVec a;
    Rat b;
};
using HPoly = std::vector<Halfspace>;

// ---------- exact rational simplex ----------

namespace detail {

struct Tableau {
    RatMat t;                // rows: constraints, last row: objective (to minimize, stored as reduced costs)
    std::vector<int> basis;  // basic variable per constraint row
};

// Bland's rule pivoting on a minimization tableau; false if unbounded.
inline bool run_simplex(Tableau& T, std::size_t ncols) {
    const std::size_t m = T.basis.size();
    while (true) {
        std::size_t enter = ncols;
        for (std::size_t j = 0; j < ncols; ++j)
            if (T.t[m][j] < 0) {
                enter = j;
                break;
            }
        if (enter == ncols) return true;
        std::size_t leave = m;
        Rat best;
        for (std::size_t i = 0; i < m; ++i) {
            if (T.t[i][enter] <= 0) continue;
            Rat ratio = T.t[i][ncols] / T.t[i][enter];
            if (leave == m || ratio < best || (ratio == best && T.basis[i] < T.basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) return false;
        Rat piv = T.t[leave][enter];
        for (auto& x : T.t[leave]) x /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave || T.t[i][enter] == 0) continue;
            Rat f = T.t[i][enter];
            for (std::size_t j = 0; j <= ncols; ++j) T.t[i][j] -= f * T.t[leave][j];
        }
        T.basis[leave] = static_cast<int>(enter);
    }
}

}  // namespace detail

enum class LpStatus { Infeasible, Unbounded, Optimal };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rat value;
};

// max c.y subject to A y <= b, y free.  With empty c only feasibility is decided.
inline LpResult lp_max(const HPoly& P, std::size_t dim, const RatVec& c = {}) {
    const std::size_t m = P.size();
    // columns: u (dim), v (dim), slack (m), artificial (m), rhs
    const std::size_t nv = 2 * dim + 2 * m;
    detail::Tableau T;
    T.t.assign(m + 1, RatVec(nv + 1, 0));
    T.basis.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        Rat sgn = P[i].b < 0 ? -1 : 1;
        for (std::size_t j = 0; j < dim; ++j) {
            T.t[i][j] = sgn * P[i].a[j];
            T.t[i][dim + j] = -sgn * P[i].a[j];
        }
        T.t[i][2 * dim + i] = sgn;
        T.t[i][2 * dim + m + i] = 1;
        T.t[i][nv] = sgn * P[i].b;
        T.basis[i] = static_cast<int>(2 * dim + m + i);
    }
    // phase one: minimize the sum of artificials
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= nv; ++j)
            if (j < 2 * dim + m || j == nv) T.t[m][j] -= T.t[i][j];
    detail::run_simplex(T, nv);
    if (T.t[m][nv] != 0) return {LpStatus::Infeasible, 0};
    if (c.empty()) return {LpStatus::Optimal, 0};
    // drive artificials out of the basis where possible, then forbid them
    for (std::size_t i = 0; i < m; ++i) {
        if (T.basis[i] < static_cast<int>(2 * dim + m)) continue;
        for (std::size_t j = 0; j < 2 * dim + m; ++j) {
            if (T.t[i][j] == 0) continue;
            Rat piv = T.t[i][j];
            for (auto& x : T.t[i]) x /= piv;
            for (std::size_t r = 0; r <= m; ++r) {
                if (r == i || T.t[r][j] == 0) continue;
                Rat f = T.t[r][j];
                for (std::size_t k = 0; k <= nv; ++k) T.t[r][k] -= f * T.t[i][k];
            }
            T.basis[i] = static_cast<int>(j);
            break;
        }
    }
    const std::size_t nr = 2 * dim + m;
    detail::Tableau S;
    S.basis = T.basis;
    S.t.assign(m + 1, RatVec(nr + 1, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < nr; ++j) S.t[i][j] = T.t[i][j];
        S.t[i][nr] = T.t[i][nv];
    }
    // redundant rows left with an artificial basic variable are all-zero; keep them inert
    for (std::size_t i = 0; i < m; ++i)
        if (S.basis[i] >= static_cast<int>(nr)) S.basis[i] = -1;
    // objective: minimize -c.(u - v)
    for (std::size_t j = 0; j < dim; ++j) {
        S.t[m][j] = -c[j];
        S.t[m][dim + j] = c[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (S.basis[i] < 0) continue;
        Rat f = S.t[m][S.basis[i]];
        if (f == 0) continue;
        for (std::size_t j = 0; j <= nr; ++j) S.t[m][j] -= f * S.t[i][j];
    }
    // run_simplex expects every row to carry a basis index
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m; ++i)
        if (S.basis[i] >= 0) keep.push_back(i);
    detail::Tableau R;
    for (auto i : keep) {
        R.t.push_back(S.t[i]);
        R.basis.push_back(S.basis[i]);
    }
    R.t.push_back(S.t[m]);
    if (!detail::run_simplex(R, nr)) return {LpStatus::Unbounded, 0};
    // the corner entry holds -z for the minimized -c.y, i.e. max c.y
    return {LpStatus::Optimal, R.t.back()[nr]};
}

inline bool feasible(const HPoly& P, std::size_t dim) {
    if (P.empty()) return true;
    return lp_max(P, dim).status == LpStatus::Optimal;
}

// Scale to a primitive integer normal; drop trivially true rows.  Returns
// false if some row reads 0 <= negative.
inline bool normalize(HPoly& P) {
    HPoly out;
    for (auto h : P) {
        Int l = 1;
        for (const auto& x : h.a) l = boost::multiprecision::lcm(l, denom(x));
        Int g = 0;
        for (auto& x : h.a) {
            x *= l;
            g = igcd(g, numer(x));
        }
        if (g == 0) {
            if (h.b < 0) return false;
            continue;
        }
        Rat s = Rat(l) / g;
        for (auto& x : h.a) x /= g;
        h.b *= s;
        out.push_back(std::move(h));
    }
    std::sort(out.begin(), out.end(), [](const Halfspace& x, const Halfspace& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    HPoly dedup;
    for (auto& h : out)
        if (dedup.empty() || dedup.back().a != h.a) dedup.push_back(std::move(h));
    P = std::move(dedup);
    return true;
}

// Rows not implied by the others.
inline HPoly remove_redundant(HPoly P, std::size_t dim) {
    if (!normalize(P)) return {Halfspace{RatVec(dim, 0), Rat(-1)}};
    for (std::size_t i = 0; i < P.size();) {
        HPoly rest;
        for (std::size_t k = 0; k < P.size(); ++k)
            if (k != i) rest.push_back(P[k]);
        auto r = lp_max(rest, dim, P[i].a);
        if (r.status == LpStatus::Optimal && r.value <= P[i].b) {
            P = std::move(rest);
        } else if (r.status == LpStatus::Infeasible) {
            return {Halfspace{RatVec(dim, 0), Rat(-1)}};
        } else {
            ++i;
        }
    }
    return P;
}

// ---------- Lasserre volume ----------

class VolumeEngine {
public:
    // dim-dimensional Lebesgue volume of {a.y <= b}; must be bounded.
    Rat volume(HPoly P, std::size_t dim) {
        if (dim == 0) throw Error("OutOfRange", "volume of a point set");
        if (!normalize(P)) return 0;
        return rec(std::move(P), dim);
    }

private:
    std::string key(const HPoly& P) const {
        std::string k;
        for (const auto& h : P) {
            for (const auto& x : h.a) k += x.str() + ",";
            k += "|" + h.b.str() + ";";
        }
        return k;
    }

    Rat rec(HPoly P, std::size_t dim) {
        if (dim == 1) {
            std::optional<Rat> lo, hi;
            for (const auto& h : P) {
                Rat v = h.b / h.a[0];
                if (h.a[0] > 0) {
                    if (!hi || v < *hi) hi = v;
                } else {
                    if (!lo || v > *lo) lo = v;
                }
            }
            if (!lo || !hi) throw Error("Unbounded", "polytope is unbounded");
            return *hi > *lo ? *hi - *lo : Rat(0);
        }
        std::string k = key(P);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;
        Rat sum = 0;
        for (std::size_t i = 0; i < P.size(); ++i) {
            if (P[i].b == 0) continue;
            std::size_t j = 0;
            while (P[i].a[j] == 0) ++j;
            const Rat aij = P[i].a[j];
            HPoly Q;
            for (std::size_t r = 0; r < P.size(); ++r) {
                if (r == i) continue;
                Rat f = P[r].a[j] / aij;
                Halfspace h;
                h.a.reserve(dim - 1);
                for (std::size_t c = 0; c < dim; ++c)
                    if (c != j) h.a.push_back(P[r].a[c] - f * P[i].a[c]);
                h.b = P[r].b - f * P[i].b;
                Q.push_back(std::move(h));
            }
            if (!normalize(Q)) continue;
            sum += P[i].b / rabs(aij) * rec(std::move(Q), dim - 1);
        }
        Rat v = sum / static_cast<long>(dim);
        memo_.emplace(std::move(k), v);
        return v;
    }

    std::map<std::string, Rat> memo_;
};

}  // namespace geom

// ---------- regions ----------

// c . x < b (strict) or c . x <= b, in sorted coordinates x_i = r_i / p.
struct LinearConstraint {
    RatVec c;
    Rat b;
    bool strict = false;
};

struct RegionSpec {
    int n = 0;
    std::string text;
    std::vector<LinearConstraint> constraints;

    // Exact test of (r_1/p, ..., r_n/p) by cross-multiplication.
    bool contains(const std::vector<u64>& r, u64 p) const {
        for (const auto& lc : constraints) {
            Int D = denom(lc.b);
            for (const auto& x : lc.c) D = boost::multiprecision::lcm(D, denom(x));
            Int lhs = 0;
            for (std::size_t i = 0; i < lc.c.size(); ++i)
                if (lc.c[i] != 0) lhs += numer(lc.c[i] * D) * Int(r[i]);
            Int rhs = numer(lc.b * D) * Int(p);
            if (lc.strict ? !(lhs < rhs) : !(lhs <= rhs)) return false;
        }
        return true;
    }
};

namespace detail {

// linear expression in x1..xn and rational constants: coefficients + constant
struct LinExpr {
    RatVec c;
    Rat k = 0;
};

class RegionParser {
public:
    RegionParser(std::string s, int n) : s_(std::move(s)), n_(n) {}

    LinExpr expr() {
        LinExpr e{RatVec(n_, 0), 0};
        int sign = 1;
        skip();
        if (peek() == '+' || peek() == '-') {
            sign = get() == '-' ? -1 : 1;
        }
        term(e, sign);
        while (true) {
            skip();
            if (peek() != '+' && peek() != '-') break;
            sign = get() == '-' ? -1 : 1;
            term(e, sign);
        }
        return e;
    }

    std::string op() {
        skip();
        std::string o;
        while (pos_ < s_.size() && (s_[pos_] == '<' || s_[pos_] == '>' || s_[pos_] == '=')) o += s_[pos_++];
        return o;
    }

    bool done() {
        skip();
        return pos_ >= s_.size();
    }

private:
    void term(LinExpr& e, int sign) {
        skip();
        Rat coef = sign;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coef *= number();
            skip();
            if (peek() == '*') {
                get();
                skip();
            } else if (peek() != 'x') {
                e.k += coef;
                return;
            }
        }
        if (peek() != 'x') throw Error("ParseError", "expected x<i> in region '" + s_ + "'");
        get();
        std::string idx;
        while (std::isdigit(static_cast<unsigned char>(peek()))) idx += get();
        if (idx.empty()) throw Error("ParseError", "missing index after x in '" + s_ + "'");
        int i = std::stoi(idx);
        if (i < 1 || i > n_) throw Error("ParseError", "x" + idx + " out of range in '" + s_ + "'");
        e.c[i - 1] += coef;
    }

    Rat number() {
        std::string num;
        while (std::isdigit(static_cast<unsigned char>(peek()))) num += get();
        skip();
        if (peek() == '/') {
            get();
            skip();
            std::string den;
            while (std::isdigit(static_cast<unsigned char>(peek()))) den += get();
            if (den.empty()) throw Error("ParseError", "bad fraction in '" + s_ + "'");
            return parse_rat(num + "/" + den);
        }
        return parse_rat(num);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return s_[pos_++]; }

    std::string s_;
    int n_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// "x1<1/3", "0 <= x2 - x1 <= 1/2", several joined by ',' or ';'.
inline RegionSpec parse_region(const std::string& text, int n) {
    RegionSpec R;
    R.n = n;
    R.text = text;
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',' || ch == ';') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    for (const auto& part : parts) {
        detail::RegionParser p(part, n);
        std::vector<detail::LinExpr> exprs{p.expr()};
        std::vector<std::string> ops;
        while (!p.done()) {
            std::string o = p.op();
            if (o != "<" && o != "<=" && o != ">" && o != ">=")
                throw Error("ParseError", "expected comparison in region '" + part + "'");
            ops.push_back(o);
            exprs.push_back(p.expr());
        }
        if (ops.empty()) throw Error("ParseError", "region '" + part + "' has no comparison");
        for (std::size_t i = 0; i < ops.size(); ++i) {
            // lhs op rhs  ->  c . x <= b
            const auto& L = exprs[i];
            const auto& Rr = exprs[i + 1];
            bool less = ops[i][0] == '<';
            LinearConstraint lc;
            lc.c.resize(n);
            for (int j = 0; j < n; ++j) lc.c[j] = less ? L.c[j] - Rr.c[j] : Rr.c[j] - L.c[j];
            lc.b = less ? Rr.k - L.k : L.k - Rr.k;
            lc.strict = ops[i].size() == 1;
            R.constraints.push_back(lc);
        }
    }
    return R;
}

// ---------- slices ----------

struct SlicePolytope {
    Perm sigma;
    IntVec k;
    std::size_t param_dim = 0;
    RatVec x0;           // base point
    IntMat K;            // kernel basis, rows are directions in x-space
    geom::HPoly halfspaces;  // in parameter space: x = x0 + sum y_c K[c]
    SurdValue gram_factor;

    RatVec point(const RatVec& y) const {
        RatVec x = x0;
        for (std::size_t c = 0; c < K.size(); ++c)
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[c] * K[c][i];
        return x;
    }
};

namespace detail {

// Rows sigma(m_j) on the left block: constraint sigma(m_j) . x = k_j.
inline IntMat permuted_rows(const RelationBasis& basis, const Perm& sigma) {
    IntMat A;
    for (const auto& r : basis.left_block()) A.push_back(act(sigma, r));
    return A;
}

// Some rational x with A x = k (A of full row rank).
inline RatVec particular_solution(const IntMat& A, const IntVec& k) {
    const std::size_t t = A.size(), n = A[0].size();
    RatMat M(t, RatVec(n + 1));
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < n; ++j) M[i][j] = A[i][j];
        M[i][n] = k[i];
    }
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < t; ++c) {
        std::size_t s = row;
        while (s < t && M[s][c] == 0) ++s;
        if (s == t) continue;
        std::swap(M[s], M[row]);
        Rat inv = 1 / M[row][c];
        for (auto& x : M[row]) x *= inv;
        for (std::size_t i = 0; i < t; ++i) {
            if (i == row || M[i][c] == 0) continue;
            Rat f = M[i][c];
            for (std::size_t j = 0; j <= n; ++j) M[i][j] -= f * M[row][j];
        }
        piv.push_back(c);
        ++row;
    }
    if (row != t) throw Error("RankDeficient", "relation rows are dependent after permutation");
    RatVec x(n, 0);
    for (std::size_t i = 0; i < t; ++i) x[piv[i]] = M[i][n];
    return x;
}

// x-space constraints of the sorted unit cube plus a region, as c . x <= b.
inline std::vector<std::pair<RatVec, Rat>> base_constraints(int n, const RegionSpec* region) {
    std::vector<std::pair<RatVec, Rat>> out;
    RatVec c(n, 0);
    c[0] = -1;
    out.push_back({c, 0});
    for (int i = 0; i + 1 < n; ++i) {
        RatVec d(n, 0);
        d[i] = 1;
        d[i + 1] = -1;
        out.push_back({d, 0});
    }
    RatVec e(n, 0);
    e[n - 1] = 1;
    out.push_back({e, 1});
    if (region)
        for (const auto& lc : region->constraints) out.push_back({lc.c, lc.b});
    return out;
}

inline SlicePolytope make_slice(const RelationBasis& basis, const Perm& sigma, const IntVec& k, const IntMat& A,
                                const IntMat& K, const SurdValue& gram, const RegionSpec* region) {
    const int n = basis.n;
    SlicePolytope s;
    s.sigma = sigma;
    s.k = k;
    s.param_dim = K.size();
    s.K = K;
    s.x0 = particular_solution(A, k);
    s.gram_factor = gram;
    for (const auto& [c, b] : base_constraints(n, region)) {
        geom::Halfspace h;
        Rat cx0 = 0;
        for (int i = 0; i < n; ++i) cx0 += c[i] * s.x0[i];
        for (const auto& dir : K) {
            Rat v = 0;
            for (int i = 0; i < n; ++i) v += c[i] * dir[i];
            h.a.push_back(v);
        }
        h.b = b - cx0;
        s.halfspaces.push_back(std::move(h));
    }
    return s;
}

inline SurdValue gram_factor(const IntMat& K) {
    if (K.empty()) return SurdValue(Rat(1));
    return SurdValue::sqrt_of(lattice::det(lattice::gram(K)));
}

}  // namespace detail

struct EnumerateOptions {
    long max_k_vectors = 2000000;
};

// All k in the mrow_bounds box whose slice is nonempty.
inline std::vector<SlicePolytope> enumerate_k_vectors(const RelationBasis& basis, const Perm& sigma,
                                                      const RegionSpec* region = nullptr,
                                                      const EnumerateOptions& opt = {}) {
    const int n = basis.n, t = basis.t();
    IntMat A = detail::permuted_rows(basis, sigma);
    if (static_cast<int>(lattice::hnf(A).size()) != t)
        throw Error("RankDeficient", "relation rows are dependent after permutation");
    IntMat K = lattice::integer_kernel(A, n);
    SurdValue gram = detail::gram_factor(K);

    std::vector<std::pair<Int, Int>> box;
    Int count = 1;
    for (int j = 1; j <= t; ++j) {
        // a linear form on the sorted cube is extremal at the vertices (0,..,0,1,..,1)
        Int lo = 0, hi = 0, tail = 0;
        for (int i = n - 1; i >= 0; --i) {
            tail += A[j - 1][i];
            lo = std::min(lo, tail);
            hi = std::max(hi, tail);
        }
        auto [blo, bhi] = mrow_bounds(basis, j);
        box.emplace_back(std::max(lo, blo), std::min(hi, bhi));
        if (box.back().first > box.back().second) return {};
        count *= box.back().second - box.back().first + 1;
    }
    if (count > opt.max_k_vectors) throw Error("TooManySlices", "k box has " + count.str() + " vectors");

    std::vector<SlicePolytope> out;
    IntVec k(t);
    for (int j = 0; j < t; ++j) k[j] = box[j].first;
    while (true) {
        auto s = detail::make_slice(basis, sigma, k, A, K, gram, region);
        if (s.param_dim == 0) {
            bool ok = true;
            for (const auto& h : s.halfspaces)
                if (h.b < 0) ok = false;
            if (ok) out.push_back(std::move(s));
        } else if (geom::feasible(s.halfspaces, s.param_dim)) {
            out.push_back(std::move(s));
        }
        int j = t - 1;
        while (j >= 0 && k[j] == box[j].second) {
            k[j] = box[j].first;
            --j;
        }
        if (j < 0) break;
        ++k[j];
    }
    return out;
}

inline SurdValue slice_volume(const SlicePolytope& slice) {
    if (slice.param_dim == 0) return SurdValue();
    auto P = geom::remove_redundant(slice.halfspaces, slice.param_dim);
    geom::VolumeEngine eng;
    return slice.gram_factor * eng.volume(std::move(P), slice.param_dim);
}

inline SurdValue region_volume(const RelationBasis& basis, const Perm& sigma, const RegionSpec& region) {
    SurdValue total;
    for (const auto& s : enumerate_k_vectors(basis, sigma, &region)) total += slice_volume(s);
    return total;
}

inline SurdValue domain_volume(const RelationBasis& basis, const Perm& sigma) {
    SurdValue total;
    for (const auto& s : enumerate_k_vectors(basis, sigma)) total += slice_volume(s);
    return total;
}

// Share of the slice sum = k in the sorted-cube domain with only the trivial relation.
inline Rat en_k(int n, int k) {
    if (n < 2 || k < 1 || k > n - 1) throw Error("OutOfRange", "en_k needs 1 <= k <= n-1");
    RelationBasis b;
    b.n = n;
    b.rows = {IntVec(n + 1, 1)};
    b.rows[0][n] = 0;
    SurdValue total, part;
    for (const auto& s : enumerate_k_vectors(b, identity_perm(n))) {
        SurdValue v = slice_volume(s);
        total += v;
        if (s.k[0] == k) part += v;
    }
    return part.ratio(total);
}

inline SurdValue gram_sqrt(const RelationBasis& basis) {
    return SurdValue::sqrt_of(lattice::det(lattice::gram(basis.left_block())));
}

// sqrt(det((m_i, m_j))) / #G-hat
inline SurdValue conjectured_c(const RelationBasis& basis, const PermSet& ghat) {
    if (basis.t() == basis.n) throw Error("Degenerate", "product of linear forms: the constant is meaningless");
    return gram_sqrt(basis) / Rat(static_cast<long>(ghat.size()));
}

}  // namespace sroot
