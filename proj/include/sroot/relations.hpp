#pragma once

#include "sroot/lattice.hpp"
#include "sroot/numeric.hpp"
#include "sroot/poly.hpp"
#include "sroot/split.hpp"

#include <json.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sroot {

enum class CertStatus { Certified, Refuted, HeuristicOnly };

inline std::string to_string(CertStatus s) {
    switch (s) {
        case CertStatus::Certified: return "Certified";
        case CertStatus::Refuted: return "Refuted";
        case CertStatus::HeuristicOnly: return "HeuristicOnly";
    }
    return "?";
}

struct CertificationReport {
    CertStatus status = CertStatus::HeuristicOnly;
    unsigned precision_used = 0;
    Int degree_bound_used = 0;
    Rat defect_bound = 0;  // upper bound on |sum l_i alpha_i - l_{n+1}|
};

struct RelationBasis {
    int n = 0;
    IntMat rows;  // t rows of length n+1: (m_{j,1}, ..., m_{j,n}, m_j)
    std::vector<int> numbering;
    std::vector<CertificationReport> certification;
    std::string note;  // set when the coefficient bound may have hidden relations

    int t() const { return static_cast<int>(rows.size()); }

    IntMat left_block() const {
        IntMat m;
        for (const auto& r : rows) m.emplace_back(r.begin(), r.begin() + n);
        return m;
    }

    bool all_certified() const {
        if (certification.size() != rows.size()) return false;
        for (const auto& c : certification)
            if (c.status != CertStatus::Certified) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["n"] = n;
        j["t"] = t();
        nlohmann::json rs = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& v : r) {
                if (fits_i64(v))
                    row.push_back(static_cast<long long>(v));
                else
                    row.push_back(v.str());
            }
            rs.push_back(row);
        }
        j["rows"] = rs;
        j["numbering"] = numbering;
        return j;
    }

    static RelationBasis from_json(const nlohmann::json& j) {
        RelationBasis b;
        try {
            b.n = j.at("n").get<int>();
            for (const auto& r : j.at("rows")) {
                IntVec row;
                for (const auto& v : r) row.push_back(v.is_string() ? Int(v.get<std::string>()) : Int(v.get<long long>()));
                if (static_cast<int>(row.size()) != b.n + 1) throw Error("ParseError", "relation row must have n+1 entries");
                b.rows.push_back(row);
            }
            if (j.contains("t") && j.at("t").get<int>() != b.t()) throw Error("ParseError", "t does not match row count");
            if (j.contains("numbering")) b.numbering = j.at("numbering").get<std::vector<int>>();
        } catch (const nlohmann::json::exception& e) {
            throw Error("ParseError", std::string("relation basis: ") + e.what());
        }
        return b;
    }
};

namespace detail {

// Interval for sum l_i alpha_i - l_{n+1} from the current boxes.
struct DefectBox {
    Rat re_lo, re_hi, im_lo, im_hi;
    bool excludes_zero() const { return re_lo > 0 || re_hi < 0 || im_lo > 0 || im_hi < 0; }
    Rat abs2_upper() const {
        Rat r = std::max(rabs(re_lo), rabs(re_hi));
        Rat i = std::max(rabs(im_lo), rabs(im_hi));
        return r * r + i * i;
    }
};

inline DefectBox defect_box(const RootSet& rs, const IntVec& l) {
    int n = rs.degree();
    DefectBox d{Rat(-l[n]), Rat(-l[n]), Rat(0), Rat(0)};
    for (int i = 1; i <= n; ++i) {
        const auto& e = rs.alpha(i);
        const Int& c = l[i - 1];
        if (c == 0) continue;
        if (c > 0) {
            d.re_lo += c * e.re_lo;
            d.re_hi += c * e.re_hi;
            d.im_lo += c * e.im_lo;
            d.im_hi += c * e.im_hi;
        } else {
            d.re_lo += c * e.re_hi;
            d.re_hi += c * e.re_lo;
            d.im_lo += c * e.im_hi;
            d.im_hi += c * e.im_lo;
        }
    }
    return d;
}

// Conjugate bound B = sum |l_i| * root bound + |l_{n+1}|.
inline Rat conjugate_bound(const IntPolynomial& f, const IntVec& l) {
    Int s = 0;
    for (int i = 0; i < f.degree(); ++i) s += iabs(l[i]);
    return s * root_magnitude_bound(f) + iabs(l[f.degree()]);
}

// Bits of precision at which a zero defect certifies with bound d.
inline unsigned bits_needed(const IntPolynomial& f, const IntVec& l, const Int& d) {
    Rat B = conjugate_bound(f, l);
    double lb = std::log2(std::max(2.0, static_cast<double>(B)));
    double total = static_cast<double>(d - 1) * lb + lb + 16;
    if (total > 4e9) return 0xffffffffu;
    return static_cast<unsigned>(std::ceil(total));
}

inline CertificationReport certify_at(const RootSet& rs, const IntVec& l, const Int& d) {
    CertificationReport rep;
    rep.precision_used = rs.precision();
    rep.degree_bound_used = d;
    DefectBox box = defect_box(rs, l);
    Rat a2 = box.abs2_upper();
    if (box.excludes_zero()) {
        rep.status = CertStatus::Refuted;
    } else {
        // |delta|^2 < B^{2(1-d)}  <=>  |delta|^2 * B^{2(d-1)} < 1
        Rat B = conjugate_bound(rs.poly(), l);
        Rat lhs = a2 * rpow(B, 2 * static_cast<int>(d - 1));
        rep.status = lhs < 1 ? CertStatus::Certified : CertStatus::HeuristicOnly;
    }
    // |delta| <= |re| + |im|
    rep.defect_bound = std::max(rabs(box.re_lo), rabs(box.re_hi)) + std::max(rabs(box.im_lo), rabs(box.im_hi));
    return rep;
}

inline unsigned level_for(unsigned bits) {
    unsigned q = 64;
    while (q < bits) q *= 2;
    return q;
}

}  // namespace detail

struct CertifyOptions {
    unsigned max_precision = 16384;
};

// Decide whether sum l_i alpha_i = l_{n+1} holds exactly.  A nonzero defect is an
// algebraic integer with conjugates bounded by B, so its norm forces
// |defect| >= B^(1-d) once d bounds the degree of the splitting field.
inline CertificationReport certify_relation(const RootSet& rootset, const IntVec& l, const Int& degree_bound,
                                            const CertifyOptions& opt = {}) {
    if (degree_bound < 1) throw Error("InvalidDegreeBound", "degree bound must be at least 1");
    if (static_cast<int>(l.size()) != rootset.degree() + 1) throw Error("OutOfRange", "relation length must be n+1");
    if (lattice::is_zero(l)) throw Error("OutOfRange", "relation must be nonzero");
    auto rep = detail::certify_at(rootset, l, degree_bound);
    if (rep.status != CertStatus::HeuristicOnly) return rep;
    unsigned need = detail::bits_needed(rootset.poly(), l, degree_bound);
    unsigned target = std::min(detail::level_for(need), detail::level_for(opt.max_precision));
    if (target <= rootset.precision()) return rep;
    RootSet fine = rootset.refine(target);
    return detail::certify_at(fine, l, degree_bound);
}

inline std::pair<Int, Int> mrow_bounds(const RelationBasis& basis, int j) {
    if (j < 1 || j > basis.t()) throw Error("OutOfRange", "row index out of range");
    Int lo = 0, hi = 0;
    const auto& r = basis.rows[j - 1];
    for (int i = 0; i < basis.n; ++i) {
        if (r[i] < 0)
            lo += r[i];
        else
            hi += r[i];
    }
    return {lo, hi};
}

struct DetectOptions {
    unsigned max_coeff_bits = 16;
    unsigned precision_bits = 256;
    Int degree_bound = 0;  // 0 = automatic
    unsigned max_precision = 16384;
    IntMat seeds;
    bool allow_heuristic = false;
    unsigned long density_sample = 200000;  // prime bound for the splitting-degree estimate
};

namespace detail {

// Smallest divisor of n! at or above x.
inline Int divisor_of_factorial_at_least(int n, const Int& x) {
    Int nf = factorial(n);
    for (Int d = std::max(Int(1), x); d <= nf; ++d)
        if (nf % d == 0) return d;
    return nf;
}

// n! unless certification at n! would exceed the precision cap; then the
// smallest divisor of n! at least 1.25 times the empirical splitting degree.
inline Int auto_degree_bound(const IntPolynomial& f, const IntMat& candidates, const DetectOptions& opt) {
    int n = f.degree();
    Int d = factorial(n);
    unsigned worst = 0;
    for (const auto& l : candidates) worst = std::max(worst, bits_needed(f, l, d));
    if (worst <= opt.max_precision) return d;
    auto sd = split_density(f, opt.density_sample);
    if (sd.split == 0) return d;
    double est = static_cast<double>(sd.primes) / static_cast<double>(sd.split);
    return divisor_of_factorial_at_least(n, Int(static_cast<long long>(std::ceil(1.25 * est))));
}

}  // namespace detail

// Integer relations among the numbered roots, as a saturated HNF basis with a
// certification report per row.
inline RelationBasis detect_relations(const RootSet& rootset_in, const DetectOptions& opt = {}) {
    const int n = rootset_in.degree();
    const IntPolynomial& f = rootset_in.poly();
    if (opt.precision_bits < 96) throw Error("OutOfRange", "precision_bits must be at least 96");
    RootSet rs = rootset_in.precision() >= opt.precision_bits ? rootset_in : rootset_in.refine(opt.precision_bits);

    // [ I_{n+1} | C Re | C Im ], alpha_{n+1} := -1
    const unsigned guard = 32;
    Int C = Int(1) << (opt.precision_bits - guard);
    IntMat L(n + 1, IntVec(n + 3, 0));
    for (int i = 0; i <= n; ++i) {
        L[i][i] = 1;
        Rat re = i < n ? rs.alpha(i + 1).re_mid() : Rat(-1);
        Rat im = i < n ? rs.alpha(i + 1).im_mid() : Rat(0);
        L[i][n + 1] = rfloor(re * C + Rat(1, 2));
        L[i][n + 2] = rfloor(im * C + Rat(1, 2));
    }
    IntMat red = lattice::lll(L);

    Int coeff_cap = Int(1) << opt.max_coeff_bits;
    IntMat candidates;
    IntVec trivial(n + 1, 1);
    trivial[n] = -f.coeff(n - 1);
    candidates.push_back(trivial);
    for (const auto& s : opt.seeds) {
        if (static_cast<int>(s.size()) != n + 1) throw Error("OutOfRange", "seed relation must have n+1 entries");
        candidates.push_back(s);
    }
    bool skipped = false;
    for (const auto& row : red) {
        IntVec l(row.begin(), row.begin() + n + 1);
        bool big = false;
        for (const auto& v : l)
            if (iabs(v) >= coeff_cap) big = true;
        if (lattice::is_zero(l)) continue;
        if (big) {
            if (!detail::defect_box(rs, l).excludes_zero()) skipped = true;
            continue;
        }
        if (detail::defect_box(rs, l).excludes_zero()) continue;
        candidates.push_back(l);
    }

    Int d = opt.degree_bound > 0 ? opt.degree_bound : detail::auto_degree_bound(f, candidates, opt);

    unsigned need = 0;
    for (const auto& l : candidates) need = std::max(need, detail::bits_needed(f, l, d));
    unsigned target = std::min(detail::level_for(need), detail::level_for(opt.max_precision));
    if (target > rs.precision()) rs = rs.refine(target);

    IntMat certified;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto& l = candidates[c];
        auto rep = detail::certify_at(rs, l, d);
        if (rep.status == CertStatus::Refuted) {
            // the first 1 + #seeds candidates are trivial and user relations
            if (c <= opt.seeds.size()) throw Error("InvalidSeed", "seed or trivial relation refuted");
            continue;
        }
        if (rep.status == CertStatus::HeuristicOnly && !opt.allow_heuristic)
            throw Error("PrecisionExhausted", "relation candidate neither certified nor refuted at " +
                                                  std::to_string(rs.precision()) + " bits");
        certified.push_back(l);
    }

    RelationBasis out;
    out.n = n;
    out.numbering = rs.numbering();
    out.rows = lattice::saturate(certified, n + 1);
    if (out.t() < 1 || out.t() > n) throw Error("InternalError", "relation rank out of range");
    for (const auto& r : out.rows) out.certification.push_back(detail::certify_at(rs, r, d));
    if (skipped) out.note = "basis may be incomplete at this coefficient bound";
    return out;
}

// Relation basis for user-supplied rows (e.g. loaded from a fixture), saturated.
inline RelationBasis basis_from_rows(int n, const IntMat& rows, std::vector<int> numbering = {}) {
    RelationBasis b;
    b.n = n;
    b.rows = lattice::saturate(rows, n + 1);
    if (numbering.empty())
        for (int i = 1; i <= n; ++i) numbering.push_back(i);
    b.numbering = std::move(numbering);
    return b;
}

}  // namespace sroot
