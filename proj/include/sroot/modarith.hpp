#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace sroot {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 addmod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    if (s >= m || s < a) s -= m;
    return s;
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Inverse of a modulo m by the extended Euclidean algorithm; gcd(a, m) = 1.
inline u64 invmod(u64 a, u64 m) {
    std::int64_t t = 0, nt = 1;
    u64 r = m, nr = a % m;
    while (nr) {
        u64 q = r / nr;
        std::int64_t tmp = t - static_cast<std::int64_t>(q) * nt;
        t = nt;
        nt = tmp;
        u64 rr = r - q * nr;
        r = nr;
        nr = rr;
    }
    return t < 0 ? static_cast<u64>(t + static_cast<std::int64_t>(m)) : static_cast<u64>(t);
}

// Square root of a quadratic residue a modulo an odd prime p (Tonelli-Shanks).
inline u64 sqrt_mod(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 c = powmod(z, q, p), x = powmod(a, (q + 1) / 2, p), t = powmod(a, q, p);
    int m = s;
    while (t != 1) {
        int i = 1;
        u64 t2 = mulmod(t, t, p);
        while (t2 != 1) {
            t2 = mulmod(t2, t2, p);
            ++i;
        }
        u64 b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        x = mulmod(x, b, p);
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        m = i;
    }
    return x;
}

// Deterministic for all 64-bit n with the first twelve prime bases.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    static const u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : small) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

inline u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        auto step = [&](u64 v) { return addmod(mulmod(v, v, n), c, n); };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

// Prime factorization as prime -> exponent.
inline std::map<u64, int> factorize(u64 n) {
    std::map<u64, int> out;
    for (u64 p = 2; p <= 1000000 && p * p <= n; ++p) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    std::vector<u64> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        u64 m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime_u64(m)) {
            ++out[m];
            continue;
        }
        u64 d = pollard_rho(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    return out;
}

inline u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

inline u64 carmichael_lambda(u64 n) {
    u64 lam = 1;
    for (auto [p, e] : factorize(n)) {
        u64 pe = 1;
        for (int i = 0; i < e - 1; ++i) pe *= p;
        u64 v = pe * (p - 1);
        if (p == 2 && e >= 3) v /= 2;
        lam = lcm_u64(lam, v);
    }
    return lam;
}

// Multiplicative order of a mod m; requires gcd(a, m) = 1.
inline u64 mult_order(u64 a, u64 m) {
    if (m == 1) return 1;
    u64 ord = carmichael_lambda(m);
    for (auto [q, e] : factorize(ord)) {
        for (int i = 0; i < e; ++i) {
            if (powmod(a, ord / q, m) == 1)
                ord /= q;
            else
                break;
        }
    }
    return ord;
}

// Primes in (lo, hi] by a segmented sieve of Eratosthenes.
class SegmentedSieve {
public:
    SegmentedSieve(u64 lo, u64 hi, u64 segment = 1u << 18) : lo_(lo), hi_(hi), seg_(segment), next_(lo + 1) {
        u64 r = 1;
        while ((r + 1) * (r + 1) <= hi) ++r;
        std::vector<char> small(r + 1, 1);
        for (u64 i = 2; i <= r; ++i) {
            if (!small[i]) continue;
            base_.push_back(i);
            for (u64 j = i * i; j <= r; j += i) small[j] = 0;
        }
    }

    // Fills out with the next batch of primes; returns false when exhausted.
    bool next_batch(std::vector<u64>& out) {
        out.clear();
        while (out.empty()) {
            if (next_ > hi_ || hi_ == 0) return false;
            u64 a = next_;
            u64 b = std::min(hi_, a + seg_ - 1);
            std::vector<char> mark(b - a + 1, 1);
            for (u64 p : base_) {
                if (p * p > b) break;
                u64 start = std::max(p * p, (a + p - 1) / p * p);
                for (u64 j = start; j <= b; j += p) mark[j - a] = 0;
            }
            for (u64 v = a; v <= b; ++v)
                if (v >= 2 && mark[v - a]) out.push_back(v);
            next_ = b + 1;
            if (b == hi_) next_ = hi_ + 1;
        }
        return true;
    }

private:
    u64 lo_, hi_, seg_, next_;
    std::vector<u64> base_;
};

inline std::vector<u64> primes_in(u64 lo, u64 hi) {
    std::vector<u64> all, batch;
    SegmentedSieve s(lo, hi);
    while (s.next_batch(batch)) all.insert(all.end(), batch.begin(), batch.end());
    return all;
}

}  // namespace sroot
