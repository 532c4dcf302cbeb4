#include "fixtures.hpp"
#include "printed_tables.hpp"
#include "sroot/groups.hpp"
#include "sroot/relations.hpp"
#include "sroot/split.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace sroot;

namespace {

std::vector<Perm> all_perms(int n) {
    std::vector<Perm> v;
    Perm p = identity_perm(n);
    do v.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return v;
}

// Rank of a rational matrix by plain elimination.
std::size_t rat_rank(RatMat a) {
    std::size_t r = 0;
    std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t s = r;
        while (s < a.size() && a[s][c] == 0) ++s;
        if (s == a.size()) continue;
        std::swap(a[s], a[r]);
        for (std::size_t i = r + 1; i < a.size(); ++i) {
            Rat f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

// Brute force over S_n: s(row) stays in the rational span (the rows are saturated).
PermSet brute_stabilizer(int n, const IntMat& rows) {
    PermSet out;
    out.n = n;
    RatMat base;
    for (const auto& r : rows) base.emplace_back(r.begin(), r.end());
    std::size_t rank = rat_rank(base);
    for (const auto& s : all_perms(n)) {
        RatMat m = base;
        for (const auto& r : rows) {
            IntVec y = r;
            for (int i = 0; i < n; ++i) y[s[i] - 1] = r[i];
            m.emplace_back(y.begin(), y.end());
        }
        if (rat_rank(m) == rank) out.elements.push_back(s);
    }
    out.normalize();
    return out;
}

RelationBasis fixture_basis(const fixtures::GroupFixture& fx) {
    return basis_from_rows(static_cast<int>(fx.numbering_values.size()), fx.rows);
}

std::vector<Perm> perms(std::initializer_list<Perm> l) { return l; }

}  // namespace

TEST(Perms, ComposeAndAction) {
    Perm s = {2, 3, 1};
    Perm t = {1, 3, 2};
    EXPECT_EQ(compose(s, t), (Perm{2, 1, 3}));
    EXPECT_EQ(compose(s, inverse(s)), identity_perm(3));
    // s(x)_i = x_{s^-1(i)}
    EXPECT_EQ(act(s, {10, 20, 30, 7}), (IntVec{30, 10, 20, 7}));
    // composition of actions
    IntVec x = {1, 2, 3};
    EXPECT_EQ(act(s, act(t, x)), act(compose(s, t), x));
    EXPECT_EQ(from_cycles(6, {{1, 3, 6}}), (Perm{3, 2, 6, 4, 5, 1}));
    EXPECT_EQ(from_cycles(6, {{2, 5}, {4, 6}}), (Perm{1, 5, 3, 6, 2, 4}));
}

TEST(Groups, TrivialRelationGivesSymmetricGroup) {
    auto b = basis_from_rows(2, {{1, 1, -1}});
    EXPECT_EQ(compute_ghat(b).size(), 2u);
    EXPECT_EQ(compute_g(b).size(), 2u);
    auto b4 = basis_from_rows(4, {{1, 1, 1, 1, 0}});
    EXPECT_EQ(compute_ghat(b4).size(), 24u);
}

TEST(Groups, EisensteinGaussProduct) {
    auto b = fixture_basis(fixtures::eisenstein_gauss());
    auto gh = compute_ghat(b);
    auto g = compute_g(b);
    EXPECT_EQ(gh.elements, perms({{1, 2, 3, 4}, {1, 3, 2, 4}, {4, 2, 3, 1}, {4, 3, 2, 1}}));
    EXPECT_EQ(g.elements, perms({{1, 2, 3, 4},
                                 {1, 3, 2, 4},
                                 {2, 1, 4, 3},
                                 {2, 4, 1, 3},
                                 {3, 1, 4, 2},
                                 {3, 4, 1, 2},
                                 {4, 2, 3, 1},
                                 {4, 3, 2, 1}}));
}

TEST(Groups, Sqrt2Shift) {
    auto b = fixture_basis(fixtures::sqrt2_shift());
    auto gh = compute_ghat(b);
    auto g = compute_g(b);
    EXPECT_EQ(gh.elements, printed::sqrt2_shift_ghat());
    EXPECT_EQ(g.elements, printed::sqrt2_shift_g());
}

TEST(Groups, DetectedBasisGivesSameGroups) {
    for (const auto& fx : {fixtures::eisenstein_gauss(), fixtures::sqrt2_shift()}) {
        auto rs = complex_roots(IntPolynomial::parse(fx.poly), 256).numbered_like(fx.numbering_values);
        auto b = detect_relations(rs);
        EXPECT_EQ(b.rows, fixture_basis(fx).rows) << fx.name;
        EXPECT_EQ(compute_ghat(b).elements, compute_ghat(fixture_basis(fx)).elements) << fx.name;
    }
}

TEST(Groups, MatchBruteForceAndAreGroups) {
    for (const auto& fx : {fixtures::eisenstein_gauss(), fixtures::sqrt2_shift(), fixtures::antipodal_sextic_swapped()}) {
        auto b = fixture_basis(fx);
        auto gh = compute_ghat(b);
        auto g = compute_g(b);
        EXPECT_EQ(gh.elements, brute_stabilizer(b.n, b.rows).elements) << fx.name;
        EXPECT_EQ(g.elements, brute_stabilizer(b.n, b.left_block()).elements) << fx.name;
        EXPECT_TRUE(gh.is_group()) << fx.name;
        EXPECT_TRUE(g.is_group()) << fx.name;
        EXPECT_TRUE(gh.subset_of(g)) << fx.name;
    }
}

TEST(Groups, IrreducibleGivesEqualGroups) {
    for (const auto& fx : fixtures::cyclotomic_sextics()) {
        auto rs = complex_roots(IntPolynomial::parse(fx.poly), 256).numbered_like(fx.numbering_values);
        auto b = detect_relations(rs);
        EXPECT_EQ(compute_ghat(b).elements, compute_g(b).elements) << fx.name;
    }
    auto b = fixture_basis(fixtures::antipodal_sextic_swapped());
    EXPECT_EQ(compute_ghat(b).size(), 12u);
}

TEST(Groups, BasisIndependence) {
    std::mt19937_64 rng(17);
    auto b = fixture_basis(fixtures::octic_i_sqrt2());
    auto gh = compute_ghat(b);
    auto g = compute_g(b);
    for (int trial = 0; trial < 3; ++trial) {
        // random unimodular row operations
        RelationBasis c = b;
        for (int op = 0; op < 20; ++op) {
            std::size_t i = rng() % c.rows.size(), j = rng() % c.rows.size();
            if (i == j) continue;
            int f = static_cast<int>(rng() % 5) - 2;
            lattice::axpy(c.rows[i], Int(f), c.rows[j]);
        }
        EXPECT_EQ(compute_ghat(c).elements, gh.elements);
        EXPECT_EQ(compute_g(c).elements, g.elements);
    }
}

TEST(Groups, DegreeGuard) {
    auto b = basis_from_rows(11, {{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0}});
    EXPECT_THROW(compute_ghat(b), Error);
}

TEST(Cosets, Representatives) {
    PermSet s2;
    s2.n = 2;
    s2.elements = {{1, 2}, {2, 1}};
    auto d = coset_reps(s2.elements, s2);
    EXPECT_EQ(d.representatives, perms({{1, 2}}));

    auto gh = compute_ghat(fixture_basis(fixtures::sqrt2_shift()));
    auto one = coset_reps(gh.elements, gh);
    EXPECT_EQ(one.representatives, perms({{1, 2, 3, 4}}));

    std::vector<Perm> amb = gh.elements;
    for (const auto& g : gh.elements) amb.push_back(compose({2, 1, 3, 4}, g));
    auto two = coset_reps(amb, gh);
    EXPECT_EQ(two.representatives, perms({{1, 2, 3, 4}, {2, 1, 3, 4}}));

    EXPECT_THROW(coset_reps({{1, 2, 3, 4}, {2, 1, 3, 4}}, gh), Error);
}

TEST(TransformK, IdentityAndRowSwap) {
    auto b = fixture_basis(fixtures::octic_i_sqrt2());
    IntVec k = {1, 1, 1, 1, 0, 1};
    EXPECT_EQ(transform_k(identity_perm(8), b, k), k);

    // [2,1,4,3] exchanges the rows alpha_1 + alpha_4 and alpha_2 + alpha_3
    RelationBasis two;
    two.n = 4;
    two.rows = {{1, 0, 0, 1, 0}, {0, 1, 1, 0, 0}};
    IntMat A = transform_matrix({2, 1, 4, 3}, two);
    EXPECT_EQ(A, (IntMat{{0, 1}, {1, 0}}));
    EXPECT_EQ(transform_k({2, 1, 4, 3}, two, {3, 5}), (IntVec{5, 3}));
    EXPECT_THROW(transform_k({1, 2, 4, 3}, two, {3, 5}), Error);
}

TEST(TransformK, MatchesResiduesOnSplitPrimes) {
    auto fx = fixtures::sqrt2_shift();
    RelationBasis b;  // stated row order, so k = (1, 0, 1)
    b.n = 4;
    b.rows = fx.rows;
    auto f = IntPolynomial::parse(fx.poly);
    Perm nu = {3, 4, 1, 2};
    auto kvec = [&](const std::vector<u64>& r, const Perm& s, u64 p) {
        IntVec k;
        for (const auto& row : b.rows) {
            Int acc = -row[4];
            for (int i = 0; i < 4; ++i) acc += row[i] * Int(r[s[i] - 1]);
            EXPECT_EQ(acc % Int(p), 0);
            k.push_back(acc / Int(p));
        }
        return k;
    };
    SplitPrimeStream st(f, 1000, 1u << 30);
    for (int c = 0; c < 10; ++c) {
        auto v = st.next();
        ASSERT_TRUE(v);
        // the identity satisfies the congruences for large split primes of this fixture
        IntVec k_id = kvec(v->roots, identity_perm(4), v->p);
        EXPECT_EQ(k_id, (IntVec{1, 0, 1}));
        IntVec k_nu = kvec(v->roots, nu, v->p);
        EXPECT_EQ(transform_k(nu, b, k_id), k_nu);
    }
}
