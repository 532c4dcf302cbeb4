#pragma once

// Polynomials, root numberings and stated relation bases used across suites.

#include "sroot/numeric.hpp"
#include "sroot/poly.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using sroot::IntMat;
using cd = std::complex<double>;

// sum c_k z^k
inline cd poly_in(const std::vector<double>& c, cd z) {
    cd r = 0, p = 1;
    for (double x : c) {
        r += x * p;
        p *= z;
    }
    return r;
}

inline std::vector<cd> eval_all(const std::vector<std::vector<double>>& exprs, cd z) {
    std::vector<cd> v;
    for (const auto& e : exprs) v.push_back(poly_in(e, z));
    return v;
}

inline cd zeta7() { return std::polar(1.0, 2 * M_PI / 7); }
inline cd zeta_x6p3() { return std::polar(std::pow(3.0, 1.0 / 6), M_PI / 6); }

struct RelationFixture {
    std::string name;
    std::string poly;
    std::vector<cd> numbering_values;  // alpha_1..alpha_n (empty: canonical)
    IntMat stated;                     // stated relation rows, (l_1..l_n | l)
};

inline std::vector<cd> antipodal_sextic_values() {
    return eval_all({{-1, -2, -1, -2, 0, -1}, {0, 0, -1, -1, 1, 1}, {1, 2, 0, 1, 1, 2}, {1, 2, 1, 2, 0, 1},
                     {0, 0, 1, 1, -1, -1}, {-1, -2, 0, -1, -1, -2}},
                    zeta7());
}

// Root lists are coefficient vectors in powers of the generator.
inline std::vector<RelationFixture> cyclotomic_sextics() {
    cd z = zeta7();
    std::vector<RelationFixture> v;
    v.push_back({"sextic_sum2_pairs", "x^6 - 4*x^5 + 9*x^4 - 15*x^3 + 18*x^2 - 16*x + 8",
                 eval_all({{1, 0, 0, 0, 1, 1}, {1, 1, 0, 0, 0, 1}, {1, 1, 0, 1}, {1, 0, 1, 1},
                           {0, -1, 0, -1, -1, -1}, {0, -1, -1, -1, 0, -1}},
                          z),
                 {{1, 0, 1, 0, 1, 0, 2}, {0, 1, 0, 1, 0, 1, 2}}});
    v.push_back({"sextic_sum1_pairs", "x^6 - 3*x^5 + 9*x^4 - 13*x^3 + 11*x^2 - 5*x + 1",
                 eval_all({{0, -1, -1, -1}, {1, 1, 0, 0, 1, 1}, {1, 1, 0, 1, 0, 1}, {1, 1, 1, 1},
                           {0, -1, 0, 0, -1, -1}, {0, -1, 0, -1, 0, -1}},
                          z),
                 {{1, 0, 0, 1, 0, 0, 1}, {0, 1, 0, 0, 1, 0, 1}, {0, 0, 1, 0, 0, 1, 1}}});
    v.push_back({"antipodal_sextic", "x^6 + 14*x^4 + 49*x^2 + 7", antipodal_sextic_values(),
                 {{1, 0, 0, 1, 0, 0, 0}, {0, 1, 0, 0, 1, 0, 0}, {0, 0, 1, 0, 0, 1, 0}, {1, 0, 1, 0, 1, 0, 0}}});
    v.push_back({"sextic_mixed", "x^6 - x^5 + x^4 - x^3 + 15*x^2 - x + 29",
                 eval_all({{0, -1, -1, 1}, {1, 1, 2, 0, 1, 1}, {-1, -1, -2, -1, -2, -1}, {1, 1, 1, 1, 2},
                           {0, -1, 0, 0, -1, 1}, {0, 1, 0, -1, 0, -1}},
                          z),
                 {{1, 1, 1, 1, 1, 1, 1}, {1, 1, 0, -1, -1, 0, 0}, {1, 0, -1, -1, 0, 1, 0}}});
    return v;
}


inline std::vector<RelationFixture> sextics_over_sqrt_minus3() {
    cd z = zeta_x6p3();
    std::vector<RelationFixture> v;
    v.push_back({"x6+3", "x^6 + 3",
                 eval_all({{0, 1}, {0, -0.5, 0, 0, -0.5}, {0, -0.5, 0, 0, 0.5}, {0, -1}, {0, 0.5, 0, 0, 0.5},
                           {0, 0.5, 0, 0, -0.5}},
                          z),
                 {{1, 1, 1, 1, 1, 1, 0}, {1, 1, 1, -1, -1, -1, 0}, {1, -2, 1, 1, -2, 1, 0}, {1, 1, -2, 1, 1, -2, 0}}});
    v.push_back({"shifted_t1", "x^6 + 6*x^5 + 24*x^4 + 14*x^3 + 15*x^2 - 12*x + 16",
                 eval_all({{-1, -1, -1, -1},
                           {-1, 0.5, 0.5, -1, 0.5, -0.5},
                           {-1, 0.5, 0.5, -1, -0.5, 0.5},
                           {-1, 1, -1, 1},
                           {-1, -0.5, 0.5, 1, -0.5, -0.5},
                           {-1, -0.5, 0.5, 1, 0.5, 0.5}},
                          z),
                 {{1, 1, 1, 1, 1, 1, -6}}});
    v.push_back({"shifted_chi2", "x^6 + 6*x^5 + 15*x^4 + 14*x^3 + 24*x^2 + 24*x + 16",
                 eval_all({{-1, -1, -1},
                           {-1, 0.5, 0.5, 0, 0.5, -0.5},
                           {-1, 0.5, 0.5, 0, -0.5, 0.5},
                           {-1, 1, -1},
                           {-1, -0.5, 0.5, 0, -0.5, -0.5},
                           {-1, -0.5, 0.5, 0, 0.5, 0.5}},
                          z),
                 {{1, 1, 1, 1, 1, 1, -6}, {1, 1, 1, -1, -1, -1, 0}}});
    v.push_back({"shifted_ab", "x^6 + 6*x^5 + 24*x^4 + 56*x^3 + 114*x^2 + 132*x + 67",
                 eval_all({{-1, -1, 0, -1},
                           {-1, 0.5, 0, -1, 0.5},
                           {-1, 0.5, 0, -1, -0.5},
                           {-1, 1, 0, 1},
                           {-1, -0.5, 0, 1, -0.5},
                           {-1, -0.5, 0, 1, 0.5}},
                          z),
                 {{1, 1, 1, 1, 1, 1, -6}, {1, -2, 1, 1, -2, 1, 0}, {1, 1, -2, 1, 1, -2, 0}}});
    return v;
}

// Polynomials with nontrivial relations from the survey tables, with numbering
// and the relation rows as stated.
struct GroupFixture {
    std::string name;
    std::string poly;
    std::vector<cd> numbering_values;
    IntMat rows;
};

inline GroupFixture eisenstein_gauss() {
    const double s3 = std::sqrt(3.0);
    return {"eisenstein_gauss", "(x^2 + x + 1)*(x^2 + 2*x + 2)",
            {cd(-1, -1), cd(-0.5, s3 / 2), cd(-0.5, -s3 / 2), cd(-1, 1)},
            {{1, 0, 0, 1, -2}, {0, 1, 1, 0, -1}}};
}

inline GroupFixture sqrt2_shift() {
    const double r2 = std::sqrt(2.0);
    return {"sqrt2_shift", "(x^2 - 2)*((x - 1)^2 - 2)",
            {cd(r2, 0), cd(1 + r2, 0), cd(-r2, 0), cd(1 - r2, 0)},
            {{1, 0, 0, 1, 1}, {1, -1, 0, 0, -1}, {1, 0, 1, 0, 0}}};
}

inline GroupFixture octic_i_sqrt2() {
    const double r2 = std::sqrt(2.0);
    return {"octic_i_sqrt2", "(x^2 + 1)*(x^2 - 2)*(x^4 - 2*x^2 + 9)",
            {cd(0, 1), cd(r2, -1), cd(r2, 0), cd(-r2, -1), cd(r2, 1), cd(-r2, 0), cd(-r2, 1), cd(0, -1)},
            {{1, 0, 0, 0, 0, 0, 0, 1, 0},
             {0, 1, 0, 0, 0, 0, 1, 0, 0},
             {0, 0, 1, 0, 0, 1, 0, 0, 0},
             {0, 0, 0, 1, 1, 0, 0, 0, 0},
             {1, 1, -1, 0, 0, 0, 0, 0, 0},
             {1, 0, 1, 0, -1, 0, 0, 0, 0}}};
}

// The antipodal sextic with alpha_2 and alpha_5 exchanged; the coset table of the
// density survey uses this numbering.
inline GroupFixture antipodal_sextic_swapped() {
    auto v = antipodal_sextic_values();
    std::swap(v[1], v[4]);
    return {"antipodal_sextic_swapped", "x^6 + 14*x^4 + 49*x^2 + 7", v,
            {{1, 0, 0, 1, 0, 0, 0}, {0, 1, 0, 0, 1, 0, 0}, {0, 0, 1, 0, 0, 1, 0}, {1, 1, 1, 0, 0, 0, 0}}};
}

// f = (x^2 + a x)^2 + b (x^2 + a x) + c, numbered so that alpha_1 + alpha_2 = alpha_3 + alpha_4 = -a.
struct QuarticFixture {
    long a, b, c;
    std::string poly() const {
        using sroot::Int;
        // x^4 + 2a x^3 + (a^2 + b) x^2 + a b x + c
        sroot::IntPolynomial f(sroot::IntVec{Int(c), Int(a * b), Int(a * a + b), Int(2 * a)});
        return f.to_string();
    }
};

inline std::vector<QuarticFixture> decomposable_quartics() { return {{1, 1, 1}, {0, 0, 1}, {2, 0, -2}, {1, 0, 2}, {3, 2, 5}}; }

// Numbering pairing the roots of x^2 + a x - beta_i.
inline std::vector<cd> quartic_numbering(const QuarticFixture& q) {
    cd disc = std::sqrt(cd(double(q.b * q.b - 4 * q.c)));
    cd betas[2] = {(-double(q.b) + disc) / 2.0, (-double(q.b) - disc) / 2.0};
    std::vector<cd> v;
    for (cd beta : betas) {
        cd d = std::sqrt(cd(double(q.a * q.a)) + 4.0 * beta);
        v.push_back((-double(q.a) + d) / 2.0);
        v.push_back((-double(q.a) - d) / 2.0);
    }
    return v;
}

}  // namespace fixtures
