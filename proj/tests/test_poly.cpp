#include "sroot/poly.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace sroot;

namespace {

IntPolynomial P(const char* s) { return IntPolynomial::parse(s); }

double newton_sqrt2() {
    double x = 1.5;
    for (int i = 0; i < 60; ++i) x = x - (x * x - 2) / (2 * x);
    return x;
}

std::vector<double> bisection_real_roots(const std::function<double(double)>& g, double lo, double hi, int cells) {
    std::vector<double> roots;
    double h = (hi - lo) / cells;
    for (int c = 0; c < cells; ++c) {
        double a = lo + c * h, b = a + h;
        if (g(a) == 0) roots.push_back(a);
        if (g(a) * g(b) < 0) {
            for (int it = 0; it < 200; ++it) {
                double m = (a + b) / 2;
                (g(a) * g(m) <= 0 ? b : a) = m;
            }
            roots.push_back((a + b) / 2);
        }
    }
    return roots;
}

}  // namespace

TEST(IntPolynomial, ParseAndPrint) {
    auto f = P("x^4 - 2*x^2 + 9");
    EXPECT_EQ(f.degree(), 4);
    EXPECT_EQ(f.coeff(0), 9);
    EXPECT_EQ(f.coeff(2), -2);
    EXPECT_EQ(f.to_string(), "x^4 - 2*x^2 + 9");
    EXPECT_EQ(P("(x^2+x+1)(x^2+2x+2)").to_string(), "x^4 + 3*x^3 + 5*x^2 + 4*x + 2");
    EXPECT_EQ(P("(x^2-2)*((x-1)^2-2)"), P("x^4 - 2*x^3 - 3*x^2 + 4*x + 2"));
    EXPECT_EQ(P("x").to_string(), "x");
    EXPECT_THROW(P("2*x^2+1"), Error);
    EXPECT_THROW(P("x^2+"), Error);
    EXPECT_THROW(P("7"), Error);
}

TEST(IntPolynomial, RoundTrips) {
    std::mt19937 rng(7);
    for (int t = 0; t < 200; ++t) {
        int n = 1 + rng() % 8;
        IntVec lower;
        for (int i = 0; i < n; ++i) lower.emplace_back(static_cast<int>(rng() % 41) - 20);
        IntPolynomial f(lower);
        EXPECT_EQ(IntPolynomial::parse(f.to_string()), f);
        EXPECT_EQ(IntPolynomial::from_json(f.to_json()), f);
        EXPECT_EQ(IntPolynomial::from_json(nlohmann::json::parse(f.to_json().dump())), f);
    }
    auto big = IntPolynomial::from_full({Int("123456789012345678901234567890"), 0, 1});
    EXPECT_EQ(IntPolynomial::from_json(big.to_json()), big);
    EXPECT_EQ(IntPolynomial::parse(big.to_string()), big);
}

TEST(IntPolynomial, Squarefree) {
    EXPECT_TRUE(is_squarefree(P("x^2+1")));
    EXPECT_FALSE(is_squarefree(P("x^2+2x+1")));
    EXPECT_TRUE(is_squarefree(P("x^4+1")));
    EXPECT_FALSE(is_squarefree(P("(x^2+1)^2*(x-3)")));
}

TEST(IntPolynomial, MagnitudeBound) {
    EXPECT_EQ(root_magnitude_bound(P("x^2+1")), 2);
    EXPECT_EQ(root_magnitude_bound(P("x^5+2")), 3);
    EXPECT_EQ(root_magnitude_bound(P("x^6+14x^4+49x^2+7")), 50);
}

TEST(IntPolynomial, QuarticDecomposition) {
    auto d = quartic_decomposable(P("x^4+1"));
    ASSERT_TRUE(d);
    EXPECT_EQ(d->g, (RatPoly{1, 0, 1}));
    EXPECT_EQ(d->h, (RatPoly{0, 0, 1}));
    auto d2 = quartic_decomposable(P("x^4+2x^3+2x^2+x+1"));
    ASSERT_TRUE(d2);
    EXPECT_EQ(d2->g, (RatPoly{1, 1, 1}));
    EXPECT_EQ(d2->h, (RatPoly{0, 1, 1}));
    EXPECT_FALSE(quartic_decomposable(P("x^4+x^3+x^2+x+1")));
    EXPECT_THROW(quartic_decomposable(P("x^3+1")), Error);
    // round trip: present iff g(h(x)) == f
    std::mt19937 rng(3);
    for (int t = 0; t < 300; ++t) {
        IntVec lo;
        for (int i = 0; i < 4; ++i) lo.emplace_back(static_cast<int>(rng() % 9) - 4);
        if (t % 3 == 0) {
            // force the coefficient identity: a3 even, a1 = a3 (4 a2 - a3^2) / 8
            Int a3 = 2 * (static_cast<int>(rng() % 5) - 2), a2 = static_cast<int>(rng() % 9) - 4;
            Int num = a3 * (4 * a2 - a3 * a3);
            if (num % 8 != 0) continue;
            lo = {lo[0], num / 8, a2, a3};
        }
        IntPolynomial f(lo);
        auto dd = quartic_decomposable(f);
        if (dd) EXPECT_EQ(compose(dd->g, dd->h), f.as_rat());
        Rat a0(lo[0]), a1(lo[1]), a2(lo[2]), a3(lo[3]);
        EXPECT_EQ(static_cast<bool>(dd), 8 * a1 == a3 * (4 * a2 - a3 * a3));
    }
}

TEST(IntPolynomial, RationalRoots) {
    EXPECT_EQ(rational_roots(P("x^2-1")), (std::vector<Int>{-1, 1}));
    EXPECT_TRUE(rational_roots(P("x^2+1")).empty());
    EXPECT_EQ(rational_roots(P("x^3-3x+2")), (std::vector<Int>{-2, 1}));
    EXPECT_EQ(rational_roots(P("x^3-x")), (std::vector<Int>{-1, 0, 1}));
}

TEST(ComplexRoots, ConjugatePair) {
    auto rs = complex_roots(P("x^2+1"), 128);
    ASSERT_EQ(rs.degree(), 2);
    EXPECT_NEAR(rs.approx(1).imag(), -1.0, 1e-15);
    EXPECT_NEAR(rs.approx(2).imag(), 1.0, 1e-15);
    EXPECT_NEAR(rs.approx(1).real(), 0.0, 1e-15);
    for (const auto& b : rs.canonical()) EXPECT_LE(b.width(), Rat(1, Int(1) << 128));
}

TEST(ComplexRoots, SqrtTwo) {
    auto rs = complex_roots(P("x^2-2"), 128);
    double s = newton_sqrt2();
    EXPECT_NEAR(rs.approx(1).real(), -s, 1e-15);
    EXPECT_NEAR(rs.approx(2).real(), s, 1e-15);
    // exact: the box around +sqrt2 straddles it
    const auto& b = rs.alpha(2);
    EXPECT_LT(b.re_lo * b.re_lo, 2);
    EXPECT_GT(b.re_hi * b.re_hi, 2);
}

TEST(ComplexRoots, RealCubic) {
    auto rs = complex_roots(P("x^3-3x+1"), 128);
    auto oracle = bisection_real_roots([](double x) { return x * x * x - 3 * x + 1; }, -3, 3, 600);
    ASSERT_EQ(oracle.size(), 3u);
    for (int i = 1; i <= 3; ++i) EXPECT_NEAR(rs.approx(i).real(), oracle[i - 1], 1e-12);
    EXPECT_NEAR(rs.approx(1).real(), -1.8794, 1e-4);
    EXPECT_NEAR(rs.approx(2).real(), 0.3473, 1e-4);
    EXPECT_NEAR(rs.approx(3).real(), 1.5321, 1e-4);
}

TEST(ComplexRoots, Errors) {
    EXPECT_THROW(complex_roots(P("x^2+2x+1"), 128), Error);
    EXPECT_THROW(complex_roots(P("x^2+1"), 32), Error);
}

TEST(ComplexRoots, MonotoneRefinementAndStableNumbering) {
    for (const char* s : {"x^6+14x^4+49x^2+7", "(x^2+1)(x^2-2)(x^4-2x^2+9)", "x^5+2", "x^3-3x+1", "x^4+1"}) {
        auto lo = complex_roots(P(s), 100);
        auto hi = complex_roots(P(s), 300);
        ASSERT_EQ(lo.degree(), hi.degree());
        for (int i = 0; i < lo.degree(); ++i) {
            EXPECT_TRUE(lo.canonical()[i].contains(hi.canonical()[i])) << s << " root " << i;
            EXPECT_LE(hi.canonical()[i].width(), Rat(1, Int(1) << 300));
        }
        for (int i = 0; i < lo.degree(); ++i)
            for (int j = i + 1; j < lo.degree(); ++j) EXPECT_FALSE(hi.canonical()[i].intersects(hi.canonical()[j]));
        auto again = complex_roots(P(s), 300);
        for (int i = 0; i < lo.degree(); ++i) EXPECT_EQ(again.canonical()[i].re_lo, hi.canonical()[i].re_lo);
    }
}

TEST(ComplexRoots, ProductOfMidpointsReproducesCoefficients) {
    for (const char* s : {"x^6+14x^4+49x^2+7", "x^7+2", "(x^2+x+1)(x^2+2x+2)"}) {
        auto f = P(s);
        auto rs = complex_roots(f, 128);
        // expand prod (x - m_i) in exact rational complex arithmetic
        int n = f.degree();
        std::vector<Rat> re{1}, im{0};
        Rat wsum = 0;
        for (int i = 1; i <= n; ++i) {
            Rat mr = rs.alpha(i).re_mid(), mi = rs.alpha(i).im_mid();
            wsum += rs.alpha(i).width();
            std::vector<Rat> nr(re.size() + 1, Rat(0)), ni(im.size() + 1, Rat(0));
            for (std::size_t k = 0; k < re.size(); ++k) {
                nr[k + 1] += re[k];
                ni[k + 1] += im[k];
                nr[k] -= re[k] * mr - im[k] * mi;
                ni[k] -= re[k] * mi + im[k] * mr;
            }
            re = nr;
            im = ni;
        }
        Rat budget = wsum * Rat(Int(1) << 20) * rpow(root_magnitude_bound(f), n);
        for (int k = 0; k <= n; ++k) {
            EXPECT_LE(rabs(re[k] - Rat(f.coeff(k))), budget);
            EXPECT_LE(rabs(im[k]), budget);
        }
    }
}

TEST(ComplexRoots, NumberingByValues) {
    auto rs = complex_roots(P("x^2+1"), 128);
    auto swapped = rs.numbered_like({{0, 1}, {0, -1}});
    EXPECT_EQ(swapped.numbering(), (std::vector<int>{2, 1}));
    EXPECT_NEAR(swapped.approx(1).imag(), 1.0, 1e-15);
    EXPECT_THROW(rs.with_numbering({1, 1}), Error);
}
