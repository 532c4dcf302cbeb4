#include "decimal_oracles.hpp"
#include "sroot/decimal.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sroot;
using namespace sroot::decimal;

namespace {

// Digits of a/b via big-integer floor(a*10^e/b).
std::string period_digits(u64 a, u64 b, u64 e) {
    Int v = Int(a) * ipow(Int(10), static_cast<unsigned>(e)) / Int(b);
    std::string s = v.str();
    return std::string(e - s.size(), '0') + s;
}

Int dec(const std::string& s) {
    auto nz = s.find_first_not_of('0');
    return nz == std::string::npos ? Int(0) : Int(s.substr(nz));
}

u64 order_bruteforce(u64 b) {
    u64 x = 10 % b, e = 1;
    while (x != 1) {
        x = x * 10 % b;
        ++e;
    }
    return e;
}

}  // namespace

TEST(PeriodSplit, OneSeventh) {
    auto p2 = period_split(1, 7, 2);
    EXPECT_EQ(p2.k, 1);
    EXPECT_EQ(p2.blocks, (std::vector<std::string>{"142", "857"}));
    EXPECT_EQ(period_split(1, 7, 3).k, 1);
    EXPECT_EQ(period_split(1, 7, 3).blocks, (std::vector<std::string>{"14", "28", "57"}));
    EXPECT_EQ(period_split(1, 7, 6).k, 3);
    EXPECT_EQ(p2.display(), "142 + 857 = 1*999");
}

TEST(PeriodSplit, OneTwentyFirst) {
    auto ps = period_split(1, 21, 2);
    EXPECT_EQ(ps.e, 6);
    EXPECT_EQ(ps.l, 3);
    EXPECT_EQ(ps.L, 3);
    EXPECT_EQ(ps.B, 7);
    EXPECT_EQ(ps.block_value(0), 47);
    EXPECT_EQ(ps.block_value(1), 619);
    EXPECT_EQ(ps.k, 2);
    EXPECT_EQ((ps.B * ps.k) % ps.L, 2 % ps.L);
}

TEST(PeriodSplit, Errors) {
    EXPECT_THROW(period_split(1, 14, 2), Error);
    EXPECT_THROW(period_split(3, 21, 2), Error);
    EXPECT_THROW(period_split(1, 7, 4), Error);
    try {
        period_split(1, 7, 4);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "DoesNotDivide");
    }
}

TEST(PeriodSplit, RandomAgainstBigIntegerOracle) {
    std::mt19937_64 rng(12345);
    int done = 0;
    while (done < 300) {
        u64 b = 3 + rng() % 200000;
        if (b % 2 == 0 || b % 5 == 0) continue;
        u64 a = 1 + rng() % (b - 1);
        if (std::gcd(a, b) != 1) continue;
        u64 e = order_bruteforce(b);
        if (e > 20000) continue;
        std::vector<u64> divs;
        for (u64 d = 2; d <= e; ++d)
            if (e % d == 0) divs.push_back(d);
        if (divs.empty()) continue;
        u64 n = divs[rng() % divs.size()];
        auto ps = period_split(a, b, n);
        ASSERT_EQ(ps.e, e);
        std::string dig = period_digits(a, b, e);
        Int sum = 0;
        for (u64 i = 0; i < n; ++i) {
            ASSERT_EQ(ps.blocks[i], dig.substr(i * ps.l, ps.l));
            sum += dec(dig.substr(i * ps.l, ps.l));
        }
        Int nines = ipow(Int(10), static_cast<unsigned>(ps.l)) - 1;
        ASSERT_EQ(sum * ps.L, Int(ps.k) * nines);
        ++done;
    }
}

TEST(KStatistic, SmallPrimes) {
    EXPECT_EQ(k_statistic(7, 3), 1);
    EXPECT_EQ(k_statistic(7, 2), 1);
    u64 k = k_statistic(13, 6);
    EXPECT_GE(k, 1);
    EXPECT_LE(k, 5);
    // roots of x^6 = 1 mod 13 other than 1
    u64 s = 0;
    for (u64 r = 2; r < 13; ++r)
        if (powmod(r, 6, 13) == 1) s += r;
    EXPECT_EQ(k, (1 + s) / 13);
}

TEST(PeriodSplit, HalfPeriodMultiplierIsUnique) {
    std::mt19937_64 rng(2024);
    int done = 0;
    while (done < 1000) {
        u64 b = 3 + rng() % 100000;
        if (b % 2 == 0 || b % 5 == 0) continue;
        if (decimal_oracle::order10(b) % 2) continue;
        auto ps = period_split(1, b, 2);
        ASSERT_GE(ps.k, 1u);
        ASSERT_LE(ps.k, ps.L);
        int solutions = 0;
        for (u64 k = 1; k <= ps.L; ++k) solutions += (ps.B * k) % ps.L == 2 % ps.L;
        ASSERT_EQ(solutions, 1) << "b=" << b;
        ASSERT_EQ((ps.B * ps.k) % ps.L, 2 % ps.L) << "b=" << b;
        ++done;
    }
}

TEST(KStatistic, RootSumOracle) {
    int checked = 0;
    for (u64 p = 7; p <= 100000; p += 2) {
        if (p % 5 == 0 || !decimal_oracle::is_prime_trial(p)) continue;
        u64 e = decimal_oracle::order10(p);
        for (u64 n : {2u, 3u, 5u}) {
            if (e % n) continue;
            ASSERT_EQ(k_statistic(p, n), decimal_oracle::root_sum_k(p, n)) << "p=" << p << " n=" << n;
            ++checked;
        }
    }
    EXPECT_GT(checked, 5000);
}
