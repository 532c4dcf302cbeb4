#pragma once

#include "sroot/formulas.hpp"
#include "sroot/geometry.hpp"
#include "sroot/groups.hpp"
#include "sroot/relations.hpp"
#include "sroot/split.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace sroot {

using KVec = std::vector<long long>;

inline KVec to_kvec(const IntVec& k) {
    KVec v;
    for (const auto& x : k) v.push_back(static_cast<long long>(x));
    return v;
}

inline std::string kvec_string(const KVec& k) {
    std::string s = "(";
    for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
    return s + ")";
}

// ---------- satisfying permutations ----------

// Backtracking search for sum_i m_{j,i} r_{sigma(i)} == m_j (mod p), all j.
class SigmaFinder {
public:
    struct Hit {
        Perm sigma;
        KVec k;
    };

    explicit SigmaFinder(const RelationBasis& basis) : n_(basis.n), t_(basis.t()) {
        if (n_ > 20) throw Error("DegreeTooLarge", "find_sigmas supports n <= 20");
        for (const auto& r : basis.rows) {
            std::vector<long long> row;
            for (int i = 0; i <= n_; ++i) {
                if (!fits_i64(r[i]) || iabs(r[i]) > Int(1) << 40) throw Error("OutOfRange", "relation coefficient too large");
                row.push_back(static_cast<long long>(r[i]));
            }
            rows_.push_back(row);
        }
        // assign positions row by row, sparsest rows first, so rows complete early
        std::vector<std::size_t> idx(t_);
        std::iota(idx.begin(), idx.end(), 0);
        auto support = [&](std::size_t j) {
            int s = 0;
            for (int i = 0; i < n_; ++i) s += rows_[j][i] != 0;
            return s;
        };
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return support(a) < support(b); });
        std::vector<char> placed(n_, 0);
        for (auto j : idx)
            for (int i = 0; i < n_; ++i)
                if (rows_[j][i] != 0 && !placed[i]) {
                    placed[i] = 1;
                    order_.push_back(i);
                }
        for (int i = 0; i < n_; ++i)
            if (!placed[i]) order_.push_back(i);
        completes_.assign(n_, {});
        for (int j = 0; j < t_; ++j) {
            int last = -1;
            for (int s = 0; s < n_; ++s)
                if (rows_[j][order_[s]] != 0) last = s;
            if (last < 0) throw Error("InvalidBasis", "relation row with empty left block");
            completes_[last].push_back(j);
        }
    }

    std::vector<Hit> find(const SortedRootVector& rv) const {
        if (static_cast<int>(rv.roots.size()) != n_) throw Error("OutOfRange", "root vector length does not match the basis");
        std::vector<Hit> out;
        std::vector<__int128> acc(t_);
        for (int j = 0; j < t_; ++j) acc[j] = -static_cast<__int128>(rows_[j][n_]);
        Perm s(n_, 0);
        std::vector<char> used(n_, 0);
        const __int128 p = rv.p;
        auto rec = [&](auto&& self, int step) -> void {
            if (step == n_) {
                KVec k(t_);
                for (int j = 0; j < t_; ++j) k[j] = static_cast<long long>(acc[j] / p);
                out.push_back({s, std::move(k)});
                return;
            }
            const int i = order_[step];
            for (int v = 0; v < n_; ++v) {
                if (used[v]) continue;
                const __int128 r = rv.roots[v];
                for (int j = 0; j < t_; ++j) acc[j] += rows_[j][i] * r;
                bool ok = true;
                for (int j : completes_[step])
                    if (acc[j] % p != 0) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    used[v] = 1;
                    s[i] = v + 1;
                    self(self, step + 1);
                    used[v] = 0;
                }
                for (int j = 0; j < t_; ++j) acc[j] -= rows_[j][i] * r;
            }
        };
        rec(rec, 0);
        std::sort(out.begin(), out.end(), [](const Hit& a, const Hit& b) { return a.sigma < b.sigma; });
        return out;
    }

private:
    int n_, t_;
    std::vector<std::vector<long long>> rows_;
    std::vector<int> order_;                 // position assigned at each step
    std::vector<std::vector<int>> completes_;  // rows whose support ends at a step
};

struct SigmaSet {
    std::vector<Perm> sigmas;           // sorted
    std::vector<Perm> representatives;  // lex-least element per coset, sorted
};

inline SigmaSet find_sigmas(const SortedRootVector& roots, const RelationBasis& basis, const PermSet& ghat) {
    SigmaFinder finder(basis);
    SigmaSet out;
    for (auto& h : finder.find(roots)) out.sigmas.push_back(std::move(h.sigma));
    if (out.sigmas.empty()) throw Error("NoneFound", "no permutation satisfies the relations mod " + std::to_string(roots.p));
    out.representatives = coset_reps(out.sigmas, ghat).representatives;
    return out;
}

inline IntVec k_vector(const SortedRootVector& roots, const RelationBasis& basis, const Perm& sigma) {
    IntVec k;
    const Int p(roots.p);
    for (const auto& row : basis.rows) {
        Int acc = -row[basis.n];
        for (int i = 0; i < basis.n; ++i) acc += row[i] * Int(roots.roots[sigma[i] - 1]);
        if (acc % p != 0) throw Error("NotCongruent", perm_string(sigma) + " fails a relation mod " + std::to_string(roots.p));
        k.push_back(acc / p);
    }
    return k;
}

// ---------- M_mu ----------

// Integer polynomials g_i, low-first, with alpha_i = g_i(alpha_1); g_1 = x.
inline std::vector<IntVec> parse_root_expressions(const std::vector<std::string>& texts) {
    std::vector<IntVec> out;
    for (const auto& t : texts) {
        detail::Parser p(t);
        out.push_back(p.parse());
    }
    return out;
}

inline u64 eval_int_poly_mod(const IntVec& g, u64 x, u64 p) {
    u64 r = 0;
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
        Int c = *it % Int(p);
        if (c < 0) c += p;
        r = addmod(mulmod(r, x, p), static_cast<u64>(c), p);
    }
    return r;
}

// Lex-least mu with g_i(r_{mu(1)}) == r_{mu(i)} mod p for all i.
inline Perm classify_m_mu(const SortedRootVector& roots, const std::vector<IntVec>& exprs) {
    const int n = static_cast<int>(roots.roots.size());
    if (static_cast<int>(exprs.size()) != n) throw Error("OutOfRange", "need one root expression per root");
    std::optional<Perm> best;
    for (int c = 0; c < n; ++c) {
        Perm mu(n);
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            u64 v = eval_int_poly_mod(exprs[i], roots.roots[c], roots.p);
            auto it = std::lower_bound(roots.roots.begin(), roots.roots.end(), v);
            if (it == roots.roots.end() || *it != v) ok = false;
            else mu[i] = static_cast<int>(it - roots.roots.begin()) + 1;
        }
        if (!ok || mu[0] != c + 1 || !is_perm(mu)) continue;
        if (!best || mu < *best) best = mu;
    }
    if (!best) throw Error("NoMatch", "root expressions do not permute the roots mod " + std::to_string(roots.p));
    return *best;
}

// ---------- counters ----------

struct SurveyCounters {
    u64 total_split = 0;
    u64 multi_coset = 0;  // primes whose satisfying set spans more than one coset
    std::map<Perm, u64> per_coset;
    std::map<std::pair<Perm, KVec>, u64> per_coset_k;
    std::map<std::tuple<Perm, KVec, int, std::vector<int>>, u64> residue;
    std::map<std::pair<Perm, int>, u64> region;
    std::map<std::pair<int, int>, u64> root_band;  // (i, band); band = #{a in grid : a <= r_i/p}
    std::map<Perm, u64> m_mu;
    std::vector<u64> excluded;  // split primes with no satisfying permutation

    template <class M>
    static void add_map(M& into, const M& from) {
        for (const auto& [k, v] : from) into[k] += v;
    }

    void merge(const SurveyCounters& o) {
        total_split += o.total_split;
        multi_coset += o.multi_coset;
        add_map(per_coset, o.per_coset);
        add_map(per_coset_k, o.per_coset_k);
        add_map(residue, o.residue);
        add_map(region, o.region);
        add_map(root_band, o.root_band);
        add_map(m_mu, o.m_mu);
        std::vector<u64> ex;
        std::merge(excluded.begin(), excluded.end(), o.excluded.begin(), o.excluded.end(), std::back_inserter(ex));
        excluded = std::move(ex);
    }

    bool operator==(const SurveyCounters& o) const {
        return total_split == o.total_split && multi_coset == o.multi_coset && per_coset == o.per_coset &&
               per_coset_k == o.per_coset_k && residue == o.residue && region == o.region && root_band == o.root_band &&
               m_mu == o.m_mu && excluded == o.excluded;
    }

    nlohmann::json to_json() const {
        using nlohmann::json;
        json j;
        j["total_split"] = total_split;
        j["multi_coset"] = multi_coset;
        j["per_coset"] = json::array();
        for (const auto& [s, c] : per_coset) j["per_coset"].push_back({s, c});
        j["per_coset_k"] = json::array();
        for (const auto& [key, c] : per_coset_k) j["per_coset_k"].push_back({key.first, key.second, c});
        j["residue"] = json::array();
        for (const auto& [key, c] : residue)
            j["residue"].push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), c});
        j["region"] = json::array();
        for (const auto& [key, c] : region) j["region"].push_back({key.first, key.second, c});
        j["root_band"] = json::array();
        for (const auto& [key, c] : root_band) j["root_band"].push_back({key.first, key.second, c});
        j["m_mu"] = json::array();
        for (const auto& [s, c] : m_mu) j["m_mu"].push_back({s, c});
        j["excluded"] = excluded;
        return j;
    }

    static SurveyCounters from_json(const nlohmann::json& j) {
        SurveyCounters c;
        c.total_split = j.at("total_split").get<u64>();
        c.multi_coset = j.at("multi_coset").get<u64>();
        for (const auto& e : j.at("per_coset")) c.per_coset[e[0].get<Perm>()] = e[1].get<u64>();
        for (const auto& e : j.at("per_coset_k")) c.per_coset_k[{e[0].get<Perm>(), e[1].get<KVec>()}] = e[2].get<u64>();
        for (const auto& e : j.at("residue"))
            c.residue[{e[0].get<Perm>(), e[1].get<KVec>(), e[2].get<int>(), e[3].get<std::vector<int>>()}] = e[4].get<u64>();
        for (const auto& e : j.at("region")) c.region[{e[0].get<Perm>(), e[1].get<int>()}] = e[2].get<u64>();
        for (const auto& e : j.at("root_band")) c.root_band[{e[0].get<int>(), e[1].get<int>()}] = e[2].get<u64>();
        for (const auto& e : j.at("m_mu")) c.m_mu[e[0].get<Perm>()] = e[1].get<u64>();
        c.excluded = j.at("excluded").get<std::vector<u64>>();
        return c;
    }
};

// ---------- configuration ----------

struct SurveyConfig {
    IntPolynomial f;
    RelationBasis basis;
    PermSet ghat, g;
    u64 X = 0;              // survey primes p <= X
    std::optional<int> m;   // when set, X is the smallest split prime above 10^m
    u64 start = 0;          // survey primes p > start
    std::vector<int> moduli;
    std::vector<RegionSpec> regions;
    std::vector<Rat> a_grid;  // ascending, in (0, 1)
    std::vector<std::string> root_expressions;
    u64 checkpoint_every = 0;  // split primes per checkpoint; 0 disables
    std::string checkpoint_path;
    int workers = 1;

    // Everything that determines the counters; workers and checkpoint settings are excluded.
    nlohmann::json identity_json() const {
        nlohmann::json j;
        j["f"] = f.to_string();
        j["basis"] = basis.to_json();
        j["X"] = X;
        j["start"] = start;
        j["moduli"] = moduli;
        j["regions"] = nlohmann::json::array();
        for (const auto& r : regions) j["regions"].push_back(r.text);
        j["a_grid"] = nlohmann::json::array();
        for (const auto& a : a_grid) j["a_grid"].push_back(a.str());
        j["root_expressions"] = root_expressions;
        return j;
    }

    std::string hash() const {
        // FNV-1a over the canonical dump
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : identity_json().dump()) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
};

// X_m: the smallest split prime above 10^m.
inline u64 threshold_for_m(const IntPolynomial& f, int m) {
    if (m < 1 || m > 12) throw Error("OutOfRange", "m must lie in 1..12");
    u64 b = 1;
    for (int i = 0; i < m; ++i) b *= 10;
    return smallest_split_prime_above(f, b);
}

// a = k / (10 n), k = 1 .. 10 n - 1
inline std::vector<Rat> default_a_grid(int n) {
    std::vector<Rat> g;
    for (int k = 1; k < 10 * n; ++k) g.emplace_back(k, 10 * n);
    return g;
}

namespace detail {

struct SurveyContext {
    const SurveyConfig* cfg;
    SigmaFinder finder;
    std::vector<std::pair<u64, u64>> grid;  // (num, den)
    std::vector<IntVec> exprs;

    explicit SurveyContext(const SurveyConfig& c) : cfg(&c), finder(c.basis) {
        for (const auto& a : c.a_grid) {
            if (a <= 0 || a >= 1) throw Error("OutOfRange", "grid values must lie in (0, 1)");
            grid.emplace_back(static_cast<u64>(numer(a)), static_cast<u64>(denom(a)));
        }
        exprs = parse_root_expressions(c.root_expressions);
    }
};

inline void tally_prime(const SurveyContext& ctx, const SortedRootVector& rv, SurveyCounters& out) {
    const SurveyConfig& cfg = *ctx.cfg;
    auto hits = ctx.finder.find(rv);
    if (hits.empty()) {
        out.excluded.push_back(rv.p);
        return;
    }
    ++out.total_split;
    std::vector<Perm> sig;
    for (const auto& h : hits) sig.push_back(h.sigma);
    std::vector<Perm> reps = coset_reps(sig, cfg.ghat).representatives;
    if (reps.size() > 1) ++out.multi_coset;
    for (const auto& rep : reps) {
        // the rep is a member of the sorted hit list; its k is the canonical one
        auto it = std::lower_bound(hits.begin(), hits.end(), rep, [](const SigmaFinder::Hit& h, const Perm& s) { return h.sigma < s; });
        const KVec& k = it->k;
        ++out.per_coset[rep];
        ++out.per_coset_k[{rep, k}];
        for (int L : cfg.moduli) {
            std::vector<int> pat;
            for (u64 r : rv.roots) pat.push_back(static_cast<int>(r % static_cast<u64>(L)));
            ++out.residue[{rep, k, L, pat}];
        }
        for (std::size_t id = 0; id < cfg.regions.size(); ++id)
            if (cfg.regions[id].contains(rv.roots, rv.p)) ++out.region[{rep, static_cast<int>(id)}];
    }
    for (std::size_t i = 0; i < rv.roots.size(); ++i) {
        int band = 0;
        const u128 r = rv.roots[i];
        for (const auto& [num, den] : ctx.grid)
            if (r * den >= static_cast<u128>(rv.p) * num) ++band;
        ++out.root_band[{static_cast<int>(i) + 1, band}];
    }
    if (!ctx.exprs.empty()) ++out.m_mu[classify_m_mu(rv, ctx.exprs)];
}

inline SurveyCounters survey_range(const SurveyContext& ctx, u64 lo, u64 hi) {
    SurveyCounters c;
    if (hi <= lo) return c;
    SplitPrimeStream s(ctx.cfg->f, lo, hi);
    while (auto v = s.next()) tally_prime(ctx, *v, c);
    return c;
}

// Primes in (lo, hi] split into `workers` ranges, merged in range order.
inline SurveyCounters survey_parallel(const SurveyContext& ctx, u64 lo, u64 hi, int workers) {
    workers = std::max(1, workers);
    std::vector<SurveyCounters> parts(workers);
    std::vector<std::thread> threads;
    const u64 width = (hi - lo + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        u64 a = std::min(hi, lo + w * width), b = std::min(hi, a + width);
        if (workers == 1) {
            parts[w] = survey_range(ctx, a, b);
        } else {
            threads.emplace_back([&, w, a, b] { parts[w] = survey_range(ctx, a, b); });
        }
    }
    for (auto& t : threads) t.join();
    SurveyCounters all;
    for (const auto& p : parts) all.merge(p);
    return all;
}

inline void write_checkpoint(const std::string& path, const std::string& hash, u64 last_prime, const SurveyCounters& c) {
    nlohmann::json j{{"version", 1}, {"config_hash", hash}, {"last_prime", last_prime}, {"counters", c.to_json()}};
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw Error("CheckpointWrite", "cannot open " + tmp);
        os << j.dump() << "\n";
        if (!os) throw Error("CheckpointWrite", "write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("CheckpointWrite", "cannot move checkpoint into " + path);
}

}  // namespace detail

struct Checkpoint {
    std::string config_hash;
    u64 last_prime = 0;
    SurveyCounters counters;
};

inline std::optional<Checkpoint> read_checkpoint(const std::string& path) {
    std::ifstream is(path);
    if (!is) return std::nullopt;
    nlohmann::json j;
    try {
        is >> j;
        if (j.at("version").get<int>() != 1) throw Error("CheckpointRead", "unsupported checkpoint version");
        return Checkpoint{j.at("config_hash").get<std::string>(), j.at("last_prime").get<u64>(),
                          SurveyCounters::from_json(j.at("counters"))};
    } catch (const nlohmann::json::exception& e) {
        throw Error("CheckpointRead", std::string("malformed checkpoint: ") + e.what());
    }
}

using ProgressFn = std::function<void(u64 done_upto, u64 X, const SurveyCounters&)>;

// All split primes in (start, X].  With a checkpoint path the range is cut into
// chunks of roughly checkpoint_every split primes; chunk bounds depend only on
// the counts, so the result does not depend on the worker count.
inline SurveyCounters run_survey(const SurveyConfig& cfg, bool resume = false, const ProgressFn& progress = {}) {
    if (cfg.X == 0) throw Error("InvalidConfig", "survey threshold X is not set");
    if (cfg.basis.n != cfg.f.degree()) throw Error("InvalidConfig", "basis size does not match the degree");
    for (int L : cfg.moduli)
        if (L < 2) throw Error("InvalidConfig", "moduli must be >= 2");
    detail::SurveyContext ctx(cfg);
    SurveyCounters total;
    u64 lo = cfg.start;
    const std::string hash = cfg.hash();
    if (resume && !cfg.checkpoint_path.empty()) {
        if (auto cp = read_checkpoint(cfg.checkpoint_path)) {
            if (cp->config_hash != hash) throw Error("CheckpointMismatch", "checkpoint was written for a different configuration");
            total = std::move(cp->counters);
            lo = cp->last_prime;
        }
    }
    if (cfg.checkpoint_every == 0 || cfg.checkpoint_path.empty()) {
        total.merge(detail::survey_parallel(ctx, lo, cfg.X, cfg.workers));
        if (progress) progress(cfg.X, cfg.X, total);
        return total;
    }
    u64 width = std::max<u64>(1024, cfg.checkpoint_every * 64);
    while (lo < cfg.X) {
        u64 hi = cfg.X - lo < width ? cfg.X : lo + width;
        auto part = detail::survey_parallel(ctx, lo, hi, cfg.workers);
        u64 found = part.total_split + part.excluded.size();
        total.merge(part);
        detail::write_checkpoint(cfg.checkpoint_path, hash, hi, total);
        if (progress) progress(hi, cfg.X, total);
        lo = hi;
        // steer the next chunk toward checkpoint_every primes
        u64 next = found == 0 ? width * 4 : static_cast<u64>(static_cast<long double>(width) * cfg.checkpoint_every / found);
        width = std::clamp<u64>(next, std::max<u64>(1024, width / 4), width * 4);
    }
    return total;
}

// ---------- Artin subgroup and R-sets ----------

struct ArtinSubgroup {
    int m = 0;
    std::set<int> elements;
    u64 sample_size = 0;
    bool stable = false;  // closure of the first half of the samples already equals the full closure

    bool contains(long long q) const {
        long long r = ((q % m) + m) % m;
        return elements.count(static_cast<int>(r)) > 0;
    }
};

namespace detail {

inline std::set<int> multiplicative_closure(const std::set<int>& gens, int m) {
    std::set<int> s{1 % m};
    std::vector<int> frontier{1 % m};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int a : frontier)
            for (int g : gens) {
                int v = static_cast<int>((static_cast<long long>(a) * g) % m);
                if (s.insert(v).second) next.push_back(v);
            }
        frontier = std::move(next);
    }
    return s;
}

}  // namespace detail

inline ArtinSubgroup artin_subgroup(const IntPolynomial& f, int m, u64 X) {
    if (m < 2) throw Error("OutOfRange", "artin_subgroup needs m >= 2");
    std::vector<int> res;
    SplitPrimeStream s(f, 0, X);
    while (auto v = s.next())
        if (v->p % static_cast<u64>(m) != 0) res.push_back(static_cast<int>(v->p % static_cast<u64>(m)));
    if (res.size() < 50) throw Error("InsufficientSamples", "only " + std::to_string(res.size()) + " split primes below X");
    ArtinSubgroup a;
    a.m = m;
    a.sample_size = res.size();
    std::set<int> half(res.begin(), res.begin() + res.size() / 2), all(res.begin(), res.end());
    a.elements = detail::multiplicative_closure(all, m);
    a.stable = detail::multiplicative_closure(half, m) == a.elements;
    return a;
}

// Moduli L / gcd(k_j, L) above 1 that r_set consults.
inline std::set<int> artin_moduli_needed(const KVec& k, int L) {
    std::set<int> out;
    for (auto kj : k) {
        int d = static_cast<int>(std::gcd(static_cast<long long>(L), std::llabs(kj)));
        if (L / d > 1) out.insert(L / d);
    }
    return out;
}

// Residue patterns {R_i} in [0, L-1]^n allowed by the congruence condition on sigma and k.
inline std::set<std::vector<int>> r_set(const RelationBasis& basis, const Perm& sigma, const KVec& k, int L,
                                        const std::map<int, ArtinSubgroup>& artin, long max_patterns = 5000000) {
    if (L < 2) throw Error("OutOfRange", "r_set needs L >= 2");
    const int n = basis.n, t = basis.t();
    double total = std::pow(static_cast<double>(L), n);
    if (total > static_cast<double>(max_patterns)) throw Error("TooManyPatterns", "L^n exceeds the pattern cap");
    auto mod = [L](long long v) { return static_cast<int>(((v % L) + L) % L); };
    std::vector<int> d(t);
    for (int j = 0; j < t; ++j) {
        d[j] = static_cast<int>(std::gcd(static_cast<long long>(L), std::llabs(k[j])));
        int mj = L / d[j];
        if (mj > 1 && !artin.count(mj)) throw Error("MissingArtinData", "no Artin subgroup for modulus " + std::to_string(mj));
    }
    std::vector<int> units;
    for (int q = 1; q < L; ++q)
        if (std::gcd(q, L) == 1) units.push_back(q);
    // q candidates satisfying the Artin condition for every j
    std::vector<int> qs;
    for (int q : units) {
        bool ok = true;
        for (int j = 0; j < t && ok; ++j) {
            int mj = L / d[j];
            if (mj > 1 && !artin.at(mj).contains(q)) ok = false;
        }
        if (ok) qs.push_back(q);
    }
    std::vector<std::vector<long long>> rows;
    for (const auto& r : basis.rows) {
        std::vector<long long> row;
        for (const auto& x : r) row.push_back(static_cast<long long>(x % Int(L)));
        rows.push_back(row);
    }
    std::set<std::vector<int>> out;
    std::vector<int> R(n, 0);
    while (true) {
        std::vector<int> s(t);
        bool ok = true;
        for (int j = 0; j < t && ok; ++j) {
            long long acc = -rows[j][n];
            for (int i = 0; i < n; ++i) acc += rows[j][i] * R[sigma[i] - 1];
            s[j] = mod(acc);
            if (std::gcd(s[j], L) != d[j]) ok = false;
        }
        if (ok) {
            ok = false;
            for (int q : qs) {
                bool all = true;
                for (int j = 0; j < t && all; ++j)
                    if (s[j] != mod(k[j] * q)) all = false;
                if (all) {
                    ok = true;
                    break;
                }
            }
        }
        if (ok) out.insert(R);
        int i = n - 1;
        while (i >= 0 && R[i] == L - 1) R[i--] = 0;
        if (i < 0) break;
        ++R[i];
    }
    return out;
}

// ---------- volumes and reports ----------

struct CosetVolumes {
    SurdValue domain;
    std::map<KVec, SurdValue> per_k;
    std::vector<SurdValue> regions;
};

struct VolumeTable {
    std::map<Perm, CosetVolumes> cosets;
    double total = 0;            // sum of domain volumes over all cosets of S_n / G-hat
    bool all_cosets = false;     // every coset was computed, not only the requested ones
};

// Some alpha_i - alpha_j is rational: e_i - e_j lies in the span of the left block.
inline bool has_rational_difference(const RelationBasis& basis) {
    IntMat H = lattice::hnf(basis.left_block());
    for (int i = 0; i < basis.n; ++i)
        for (int j = i + 1; j < basis.n; ++j) {
            IntVec e(basis.n, 0);
            e[i] = 1;
            e[j] = -1;
            if (lattice::in_lattice(H, e)) return true;
        }
    return false;
}

inline std::vector<Perm> all_coset_reps(const PermSet& ghat) {
    std::vector<Perm> all;
    Perm p = identity_perm(ghat.n);
    do all.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return coset_reps(all, ghat).representatives;
}

// Volumes for the requested coset reps.  The normalizing total is
// sqrt(det)/#G-hat when no root difference is rational; otherwise every coset
// is computed and summed.
inline VolumeTable compute_volumes(const RelationBasis& basis, const PermSet& ghat, std::vector<Perm> reps,
                                   const std::vector<RegionSpec>& regions, bool force_all = false) {
    VolumeTable vt;
    const bool rational = has_rational_difference(basis);
    if (rational || force_all) {
        auto all = all_coset_reps(ghat);
        reps.insert(reps.end(), all.begin(), all.end());
        vt.all_cosets = true;
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    for (const auto& rep : reps) {
        CosetVolumes cv;
        for (const auto& s : enumerate_k_vectors(basis, rep)) {
            SurdValue v = slice_volume(s);
            if (v.is_zero()) continue;
            cv.domain += v;
            cv.per_k[to_kvec(s.k)] += v;
        }
        for (const auto& R : regions) cv.regions.push_back(region_volume(basis, rep, R));
        vt.cosets[rep] = std::move(cv);
    }
    if (vt.all_cosets) {
        for (const auto& [rep, cv] : vt.cosets) vt.total += cv.domain.to_double();
    } else {
        vt.total = (gram_sqrt(basis) / Rat(static_cast<long>(ghat.size()))).to_double();
    }
    return vt;
}

struct ReportRow {
    std::string table;
    std::string m_or_X;
    std::string key;
    double empirical = 0;
    std::optional<double> predicted;
    std::optional<double> diff;
    std::string source;
};

struct Report {
    std::vector<ReportRow> rows;
    std::vector<std::string> notes;

    void append(const Report& o) {
        rows.insert(rows.end(), o.rows.begin(), o.rows.end());
        notes.insert(notes.end(), o.notes.begin(), o.notes.end());
    }

    std::optional<double> find(const std::string& table, const std::string& key = "") const {
        for (const auto& r : rows)
            if (r.table == table && (key.empty() || r.key == key)) return r.diff ? r.diff : std::optional<double>(r.empirical);
        return std::nullopt;
    }

    static std::string csv_field(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }

    static std::string num(double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.8f", v);
        return buf;
    }

    std::string to_csv(bool header = true) const {
        std::ostringstream os;
        if (header) os << "table,m_or_X,key,empirical,predicted,diff,source\n";
        for (const auto& r : rows) {
            os << csv_field(r.table) << ',' << csv_field(r.m_or_X) << ',' << csv_field(r.key) << ',' << num(r.empirical) << ','
               << (r.predicted ? num(*r.predicted) : "") << ',' << (r.diff ? num(*r.diff) : "") << ',' << csv_field(r.source)
               << '\n';
        }
        return os.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["rows"] = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json x{{"table", r.table}, {"m_or_X", r.m_or_X}, {"key", r.key}, {"empirical", r.empirical}, {"source", r.source}};
            x["predicted"] = r.predicted ? nlohmann::json(*r.predicted) : nlohmann::json();
            x["diff"] = r.diff ? nlohmann::json(*r.diff) : nlohmann::json();
            j["rows"].push_back(x);
        }
        j["notes"] = notes;
        return j;
    }
};

inline double ratio_d(u64 a, u64 b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

// Coset densities against normalized volumes, per-k and region shares, the
// root histogram against the closed-form densities when t = 1, and M_mu classes.
inline Report conjecture_report(const SurveyCounters& c, const SurveyConfig& cfg, const VolumeTable& vol, const std::string& label) {
    Report R;
    const int n = cfg.basis.n;
    const double N = static_cast<double>(c.total_split);
    for (const auto& [rep, cnt] : c.per_coset)
        if (!vol.cosets.count(rep)) throw Error("MissingVolume", "no volume for coset " + perm_string(rep));

    // cosets
    std::set<Perm> reps;
    for (const auto& [rep, cnt] : c.per_coset) reps.insert(rep);
    for (const auto& [rep, cv] : vol.cosets) reps.insert(rep);
    double observed_vol = 0, lo_ratio = 0, hi_ratio = 0;
    bool first = true;
    for (const auto& rep : reps) {
        auto it = c.per_coset.find(rep);
        u64 cnt = it == c.per_coset.end() ? 0 : it->second;
        const CosetVolumes& cv = vol.cosets.at(rep);
        double v = cv.domain.to_double();
        double emp = ratio_d(cnt, c.total_split), pred = vol.total > 0 ? v / vol.total : 0;
        R.rows.push_back({"coset", label, "sigma=" + perm_string(rep), emp, pred, std::abs(emp - pred), "normalized vol(D(f,sigma))"});
        if (cnt > 0) observed_vol += v;
        if (cnt > 0 && v > 0) {
            double r = emp / pred;
            lo_ratio = first ? r : std::min(lo_ratio, r);
            hi_ratio = first ? r : std::max(hi_ratio, r);
            first = false;
        }
        if (cnt == 0 && !cv.domain.is_zero())
            R.rows.push_back({"zero_pr_positive_vol", label, "sigma=" + perm_string(rep), 0.0, pred, pred, "coset never observed"});
        if (cnt > 0 && cv.domain.is_zero())
            R.rows.push_back({"positive_pr_zero_vol", label, "sigma=" + perm_string(rep), emp, 0.0, emp, "observed coset with empty domain"});
    }
    if (!first)
        R.rows.push_back({"coset_spread", label, "max/min of Pr/vol share", hi_ratio / lo_ratio, 1.0, hi_ratio / lo_ratio - 1, "ratio should not depend on sigma"});
    if (!vol.all_cosets && vol.total > 0 && observed_vol < vol.total * (1 - 1e-12))
        R.notes.push_back("unobserved cosets carry volume " + Report::num(vol.total - observed_vol));
    double sum_pr = 0;
    for (const auto& [rep, cnt] : c.per_coset) sum_pr += ratio_d(cnt, c.total_split) * static_cast<double>(cfg.ghat.size());
    R.rows.push_back({"sum_pr", label, "sum over S_n of Pr(f,sigma)", sum_pr, static_cast<double>(cfg.ghat.size()),
                      std::abs(sum_pr - static_cast<double>(cfg.ghat.size())), "#G-hat"});

    // per-k shares inside each coset
    bool single_k = true;
    for (const auto& [rep, cnt] : c.per_coset) {
        int ks = 0;
        for (const auto& [key, kc] : c.per_coset_k)
            if (key.first == rep) ++ks;
        if (ks > 1) single_k = false;
    }
    for (const auto& [key, kc] : c.per_coset_k) {
        const auto& [rep, k] = key;
        const CosetVolumes& cv = vol.cosets.at(rep);
        double emp = ratio_d(kc, c.per_coset.at(rep));
        double pred = 0;
        if (auto it = cv.per_k.find(k); it != cv.per_k.end() && !cv.domain.is_zero()) pred = it->second.to_double() / cv.domain.to_double();
        R.rows.push_back({"coset_k", label, "sigma=" + perm_string(rep) + ";k=" + kvec_string(k), emp, pred, std::abs(emp - pred),
                          "slice volume share"});
    }
    if (single_k && !c.per_coset.empty())
        R.notes.push_back("each observed coset has a single k-vector, so the per-k split prediction holds trivially");

    // regions
    for (std::size_t id = 0; id < cfg.regions.size(); ++id) {
        u64 in_all = 0;
        double vin = 0, vall = 0;
        for (const auto& [rep, cnt] : c.per_coset) {
            auto it = c.region.find({rep, static_cast<int>(id)});
            u64 in = it == c.region.end() ? 0 : it->second;
            in_all += in;
            const CosetVolumes& cv = vol.cosets.at(rep);
            if (id >= cv.regions.size()) throw Error("MissingVolume", "no region volume for " + perm_string(rep));
            double dv = cv.domain.to_double(), rv = cv.regions[id].to_double();
            double emp = ratio_d(in, cnt), pred = dv > 0 ? rv / dv : 0;
            vin += rv;
            vall += dv;
            R.rows.push_back({"region", label, "sigma=" + perm_string(rep) + ";region=" + cfg.regions[id].text, emp, pred,
                              std::abs(emp - pred), "region_volume / domain_volume"});
        }
        double emp = ratio_d(in_all, c.total_split), pred = vall > 0 ? vin / vall : 0;
        R.rows.push_back({"region_total", label, "region=" + cfg.regions[id].text, emp, pred, std::abs(emp - pred),
                          "region_volume / domain_volume over observed cosets"});
    }

    // 1-D histogram: only the trivial relation
    if (cfg.basis.t() == 1 && !cfg.a_grid.empty()) {
        std::map<int, std::vector<u64>> cum;  // i -> #{r_i/p < a_g} per grid index
        for (int i = 1; i <= n; ++i) cum[i].assign(cfg.a_grid.size(), 0);
        for (const auto& [key, cnt] : c.root_band) {
            const auto& [i, band] = key;
            for (std::size_t g = static_cast<std::size_t>(band); g < cfg.a_grid.size(); ++g) cum[i][g] += cnt;
        }
        double worst = 0;
        std::string worst_key;
        for (int i = 1; i <= n; ++i)
            for (std::size_t g = 0; g < cfg.a_grid.size(); ++g) {
                double emp = ratio_d(cum[i][g], c.total_split);
                double pred = static_cast<double>(formulas::d_closed(cfg.a_grid[g], i, n));
                double d = pred > 0 ? std::abs(1 - emp / pred) : std::abs(emp);
                std::string key = "i=" + std::to_string(i) + ";a=" + cfg.a_grid[g].str();
                R.rows.push_back({"root_band", label, key, emp, pred, d, "d_closed(a,i,n)"});
                if (d > worst) {
                    worst = d;
                    worst_key = key;
                }
            }
        R.rows.push_back({"diff", label, worst_key, worst, std::nullopt, worst, "max |1 - empirical/d_closed|"});
        for (std::size_t g = 0; g < cfg.a_grid.size(); ++g) {
            double mean = 0;
            for (int i = 1; i <= n; ++i) mean += ratio_d(cum[i][g], c.total_split);
            mean /= n;
            double a = static_cast<double>(cfg.a_grid[g]);
            R.rows.push_back({"uniform", label, "a=" + cfg.a_grid[g].str(), mean, a, std::abs(mean - a), "mean_i Pr(r_i/p < a) = a"});
        }
    }

    // M_mu
    u64 mu_total = 0;
    for (const auto& [mu, cnt] : c.m_mu) mu_total += cnt;
    for (const auto& [mu, cnt] : c.m_mu)
        R.rows.push_back({"m_mu", label, "mu=" + perm_string(mu), ratio_d(cnt, mu_total), std::nullopt, std::nullopt, "measured only"});
    if (!c.excluded.empty()) R.notes.push_back(std::to_string(c.excluded.size()) + " split primes had no satisfying permutation and were excluded");
    if (c.multi_coset > 0) R.notes.push_back(std::to_string(c.multi_coset) + " primes matched more than one coset");
    return R;
}

using RSetKey = std::tuple<Perm, KVec, int>;

// Per pattern in the R-set: |frequency * #R - 1|; patterns outside the set are violations.
inline Report conjecture3_report(const SurveyCounters& c, const std::map<RSetKey, std::set<std::vector<int>>>& rsets,
                                 const std::string& label) {
    Report R;
    for (const auto& [key, patterns] : rsets) {
        const auto& [rep, k, L] = key;
        std::map<std::vector<int>, u64> seen;
        u64 total = 0;
        for (const auto& [rk, cnt] : c.residue)
            if (std::get<0>(rk) == rep && std::get<1>(rk) == k && std::get<2>(rk) == L) {
                seen[std::get<3>(rk)] += cnt;
                total += cnt;
            }
        const std::string base = "sigma=" + perm_string(rep) + ";k=" + kvec_string(k) + ";L=" + std::to_string(L);
        double worst = 0;
        const double size = static_cast<double>(patterns.size());
        for (const auto& pat : patterns) {
            auto it = seen.find(pat);
            double emp = ratio_d(it == seen.end() ? 0 : it->second, total) * size;
            double d = std::abs(emp - 1);
            worst = std::max(worst, d);
            std::string ps = "(";
            for (std::size_t i = 0; i < pat.size(); ++i) ps += (i ? "," : "") + std::to_string(pat[i]);
            R.rows.push_back({"residue", label, base + ";R=" + ps + ")", emp, 1.0, d, "frequency * #R"});
        }
        for (const auto& [pat, cnt] : seen) {
            if (patterns.count(pat)) continue;
            std::string ps = "(";
            for (std::size_t i = 0; i < pat.size(); ++i) ps += (i ? "," : "") + std::to_string(pat[i]);
            R.rows.push_back({"residue_violation", label, base + ";R=" + ps + ")", ratio_d(cnt, total), 0.0, ratio_d(cnt, total),
                              "pattern outside R"});
        }
        R.rows.push_back({"residue_max", label, base + ";#R=" + std::to_string(patterns.size()), worst, std::nullopt, worst,
                          "max over R of |frequency * #R - 1|"});
    }
    return R;
}

// R-sets for every observed (coset, k) and every modulus, with Artin data sampled up to artin_X.
inline std::map<RSetKey, std::set<std::vector<int>>> observed_r_sets(const SurveyCounters& c, const SurveyConfig& cfg, u64 artin_X) {
    std::map<int, ArtinSubgroup> artin;
    std::map<RSetKey, std::set<std::vector<int>>> out;
    for (const auto& [key, cnt] : c.per_coset_k) {
        const auto& [rep, k] = key;
        for (int L : cfg.moduli) {
            for (int m : artin_moduli_needed(k, L))
                if (!artin.count(m)) artin[m] = artin_subgroup(cfg.f, m, artin_X);
            out[{rep, k, L}] = r_set(cfg.basis, rep, k, L, artin);
        }
    }
    return out;
}

}  // namespace sroot
