// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "decimal_oracles.hpp"
#include "fixtures.hpp"
#include "printed_tables.hpp"
#include "sroot/decimal.hpp"
#include "sroot/formulas.hpp"
#include "sroot/geometry.hpp"
#include "sroot/groups.hpp"
#include "sroot/lattice.hpp"
#include "sroot/relations.hpp"
#include "sroot/survey.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace sroot;

namespace {

// tolerances
constexpr double kQuadraticDiffTol = 0.002;
constexpr double kQuadraticResidueTol = 0.005;
constexpr double kQuadraticM7Seconds = 120.0;
constexpr double kSexticDiffTol = 0.002;
constexpr double kOcticShareTol = 0.01;
constexpr u64 kOcticX = 10000000;
constexpr int kPrimesPerFixture = 1000;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string fmt(double v, int digits = 5) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

RelationBasis fixture_basis(const fixtures::GroupFixture& fx) {
    return basis_from_rows(static_cast<int>(fx.numbering_values.size()), fx.rows);
}

RootSet numbered(const std::string& poly, const std::vector<std::complex<double>>& values) {
    auto rs = complex_roots(IntPolynomial::parse(poly), 256);
    return values.empty() ? rs : rs.numbered_like(values);
}

SurveyConfig make_config(const std::string& poly, const RelationBasis& b) {
    SurveyConfig c;
    c.f = IntPolynomial::parse(poly);
    c.basis = b;
    c.ghat = compute_ghat(b);
    c.g = compute_g(b);
    return c;
}

// First row of a table whose key starts with prefix.
std::optional<double> find_prefix(const Report& R, const std::string& table, const std::string& prefix) {
    for (const auto& r : R.rows)
        if (r.table == table && r.key.rfind(prefix, 0) == 0) return r.diff ? r.diff : std::optional<double>(r.empirical);
    return std::nullopt;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// x^2 + 1 at m = 5, 6, 7: diff, and the residue table Diff for L = 2..5 at m = 5, 6.
void quadratic_tables(Outcome& out) {
    for (int m = 5; m <= 7; ++m) {
        auto cfg = make_config("x^2 + 1", basis_from_rows(2, {{1, 1, 0}}));
        cfg.a_grid = default_a_grid(2);
        if (m <= 6) cfg.moduli = {2, 3, 4, 5};
        auto t0 = std::chrono::steady_clock::now();
        cfg.X = threshold_for_m(cfg.f, m);
        auto c = run_survey(cfg);
        auto vt = compute_volumes(cfg.basis, cfg.ghat, {identity_perm(2)}, cfg.regions);
        Report R = conjecture_report(c, cfg, vt, std::to_string(m));
        if (!cfg.moduli.empty()) R.append(conjecture3_report(c, observed_r_sets(c, cfg, cfg.X), std::to_string(m)));
        const double secs = seconds_since(t0);
        auto diff = R.find("diff");
        const double want = printed::quadratic_diff()[m - 5];
        out.detail << " m=" << m << " diff " << (diff ? fmt(*diff) : "missing") << " (" << want << ")";
        out.require(diff && std::abs(*diff - want) <= kQuadraticDiffTol, "diff at m=" + std::to_string(m));
        if (m == 7) {
            out.detail << " in " << fmt(secs, 1) << "s";
            out.require(secs < kQuadraticM7Seconds, "m=7 runtime");
            continue;
        }
        for (int L = 2; L <= 5; ++L) {
            auto d = find_prefix(R, "residue_max", "sigma=[1,2];k=(1);L=" + std::to_string(L) + ";");
            const double w = printed::quadratic_residue_diff()[L - 2][m - 5];
            out.require(d && std::abs(*d - w) <= kQuadraticResidueTol,
                        "Diff L=" + std::to_string(L) + " m=" + std::to_string(m) + " got " + (d ? fmt(*d) : "missing"));
        }
        out.detail << ", L=2..5 Diff ok";
    }
}

// Antipodal sextic: first-coset diff at m = 5, 6 and the exact coset volumes.
void sextic_cosets(Outcome& out) {
    auto fx = fixtures::antipodal_sextic_swapped();
    auto b = fixture_basis(fx);
    const Perm s1 = {1, 2, 4, 6, 5, 3}, s2 = {1, 2, 3, 6, 5, 4};
    for (int m = 5; m <= 6; ++m) {
        auto cfg = make_config(fx.poly, b);
        cfg.X = threshold_for_m(cfg.f, m);
        auto c = run_survey(cfg);
        auto vt = compute_volumes(b, cfg.ghat, {s1, s2}, {});
        Report R = conjecture_report(c, cfg, vt, std::to_string(m));
        auto d = R.find("coset", "sigma=" + perm_string(coset_rep(s1, cfg.ghat)));
        const double want = printed::sextic_coset_diff()[m - 5];
        out.detail << " m=" << m << " diff1 " << (d ? fmt(*d) : "missing") << " (" << want << ")";
        out.require(d && std::abs(*d - want) <= kSexticDiffTol, "diff1 at m=" + std::to_string(m));
    }
    SurdValue v1 = domain_volume(b, s1), v2 = domain_volume(b, s2);
    out.detail << "; vol " << v1.to_string() << ", " << v2.to_string();
    out.require(v1 == SurdValue(Rat(1, 8), 3), "vol(sigma1) = sqrt(3)/8");
    out.require(v2 == SurdValue(Rat(1, 24), 3), "vol(sigma2) = sqrt(3)/24");
    out.require(v1 == v2 * Rat(3), "vol(sigma1) = 3 vol(sigma2)");
}

// Octic: exact volumes of the listed representatives and coset frequencies at X = 10^7.
void octic_cosets(Outcome& out) {
    auto fx = fixtures::octic_i_sqrt2();
    auto b = fixture_basis(fx);
    auto cfg = make_config(fx.poly, b);
    const auto reps = printed::octic_reps();
    const auto vols = printed::octic_volumes();
    const auto shares = printed::octic_shares();
    int exact = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) exact += domain_volume(b, reps[i]) == SurdValue(vols[i]);
    out.detail << " exact volumes " << exact << "/7";
    out.require(exact == 7, "exact volumes");
    cfg.X = kOcticX;
    auto c = run_survey(cfg);
    double worst = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        auto it = c.per_coset.find(coset_rep(reps[i], cfg.ghat));
        double freq = it == c.per_coset.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(c.total_split);
        worst = std::max(worst, std::abs(freq - static_cast<double>(shares[i])));
    }
    out.detail << "; " << c.total_split << " split primes, max |freq - share| " << fmt(worst, 4);
    out.require(worst <= kOcticShareTol, "coset frequencies");
    out.require(c.per_coset.size() == 7, "seven observed cosets");
}

SurdValue sum_over_symmetric_group(const RelationBasis& b) {
    SurdValue s;
    Perm p = identity_perm(b.n);
    do s += domain_volume(b, p);
    while (std::next_permutation(p.begin(), p.end()));
    return s;
}

void group_fixtures(Outcome& out) {
    auto b1 = fixture_basis(fixtures::eisenstein_gauss());
    auto b2 = fixture_basis(fixtures::sqrt2_shift());
    out.require(compute_ghat(b1).elements == printed::eisenstein_gauss_ghat(), "eisenstein_gauss ghat");
    out.require(compute_g(b1).elements == printed::eisenstein_gauss_g(), "eisenstein_gauss g");
    out.require(compute_ghat(b2).elements == printed::sqrt2_shift_ghat(), "sqrt2_shift ghat");
    out.require(compute_g(b2).elements == printed::sqrt2_shift_g(), "sqrt2_shift g");
    out.detail << " groups 4/8 and 2/8 elements";
    for (const auto& fx : {fixtures::eisenstein_gauss(), fixtures::antipodal_sextic_swapped()}) {
        auto b = fixture_basis(fx);
        SurdValue sum = sum_over_symmetric_group(b), root = gram_sqrt(b);
        out.detail << "; " << fx.name << " sum " << sum.to_string() << " vs " << root.to_string();
        out.require(sum == root, fx.name + " volume sum");
    }
}

void relation_bases(Outcome& out) {
    namespace lat = sroot::lattice;
    int checked = 0;
    std::vector<fixtures::RelationFixture> stated = fixtures::cyclotomic_sextics();
    for (const auto& fx : fixtures::sextics_over_sqrt_minus3()) stated.push_back(fx);
    for (const auto& fx : stated) {
        auto b = detect_relations(numbered(fx.poly, fx.numbering_values));
        out.require(b.rows == lat::saturate(fx.stated, b.n + 1), fx.name + " basis");
        ++checked;
    }
    for (const auto& q : fixtures::decomposable_quartics()) {
        auto b = detect_relations(numbered(q.poly(), fixtures::quartic_numbering(q)));
        out.require(b.rows == lat::hnf({{1, 1, 0, 0, Int(-q.a)}, {0, 0, 1, 1, Int(-q.a)}}), q.poly() + " basis");
        ++checked;
    }
    for (const char* p : {"x^2 + 1", "x^3 + 2", "x^5 + 2", "x^7 + 2"}) {
        auto b = detect_relations(complex_roots(IntPolynomial::parse(p), 256));
        out.require(b.t() == 1 && b.all_certified(), std::string(p) + " t=1");
        ++checked;
    }
    out.detail << " " << checked << " polynomials";
}

void closed_forms(Outcome& out) {
    using namespace sroot::formulas;
    int points = 0;
    for (int n : {2, 3})
        for (int i = 1; i <= n; ++i)
            for (const auto& br : printed::density_branches(i, n))
                for (int s = 1; s <= 100; ++s) {
                    Rat a = br.lo + (br.hi - br.lo) * Rat(s, 101);
                    out.require(d_closed(a, i, n) == br.value(a), "printed branch");
                    ++points;
                }
    for (int n = 2; n <= 6; ++n)
        for (int s = 0; s < 100; ++s) {
            Rat a(s, 100), sum = 0;
            for (int i = 1; i <= n; ++i) sum += d_closed(a, i, n);
            out.require(sum == n * a, "sum of densities");
        }
    for (int n = 2; n <= 7; ++n)
        for (int k = 1; k <= n - 1; ++k) out.require(en_k(n, k) == Rat(eulerian(n - 1, k), factorial(n - 1)), "en_k");
    auto rep = identity_suite(12);
    out.require(rep.all_passed(), "identity suite");
    out.detail << " " << points << " branch points, identity checks " << rep.checks.size();
}

void decimal_suite(Outcome& out) {
    using namespace sroot::decimal;
    out.require(period_split(1, 7, 2).k == 1 && period_split(1, 7, 3).k == 1 && period_split(1, 7, 6).k == 3, "1/7 triple");
    out.detail << " 1/7: " << period_split(1, 7, 2).display();
    std::mt19937_64 rng(99);
    int inputs = 0;
    while (inputs < 1000) {
        u64 b = 3 + rng() % 100000;
        if (b % 2 == 0 || b % 5 == 0 || decimal_oracle::order10(b) % 2) continue;
        auto ps = period_split(1, b, 2);
        int solutions = 0;
        for (u64 k = 1; k <= ps.L; ++k) solutions += (ps.B * k) % ps.L == 2 % ps.L;
        out.require(solutions == 1 && (ps.B * ps.k) % ps.L == 2 % ps.L && ps.k >= 1 && ps.k <= ps.L, "Bk = 2 mod L at b=" + std::to_string(b));
        ++inputs;
    }
    int primes = 0;
    for (u64 p = 7; p <= 100000; p += 2) {
        if (p % 5 == 0 || !decimal_oracle::is_prime_trial(p)) continue;
        u64 e = decimal_oracle::order10(p);
        for (u64 n : {2u, 3u, 5u})
            if (e % n == 0) {
                out.require(k_statistic(p, n) == decimal_oracle::root_sum_k(p, n), "k_statistic p=" + std::to_string(p));
                ++primes;
            }
    }
    out.detail << "; " << inputs << " random inputs, " << primes << " (p, n) pairs";
}

void structural(Outcome& out) {
    struct Case {
        std::string name, poly;
        RelationBasis basis;
    };
    std::vector<Case> cases;
    for (const auto& fx : {fixtures::eisenstein_gauss(), fixtures::sqrt2_shift(), fixtures::antipodal_sextic_swapped(),
                           fixtures::octic_i_sqrt2()})
        cases.push_back({fx.name, fx.poly, fixture_basis(fx)});
    for (const auto& fx : fixtures::cyclotomic_sextics()) cases.push_back({fx.name, fx.poly, basis_from_rows(6, fx.stated)});
    cases.push_back({"x^2 + 1", "x^2 + 1", basis_from_rows(2, {{1, 1, 0}})});
    std::mt19937_64 rng(5);
    for (const auto& cs : cases) {
        auto f = IntPolynomial::parse(cs.poly);
        auto gh = compute_ghat(cs.basis);
        int seen = 0, good = 0;
        // random starting points, each taking the next split prime
        while (seen < kPrimesPerFixture) {
            u64 start = 100000 + rng() % 1000000000ULL;
            SplitPrimeStream s(f, start, start + 100000000ULL);
            auto v = s.next();
            if (!v) continue;
            ++seen;
            good += find_sigmas(*v, cs.basis, gh).sigmas.size() == gh.size();
        }
        out.require(good == seen, cs.name + " #sigmas = #ghat on " + std::to_string(good) + "/" + std::to_string(seen));
    }
    out.detail << " " << cases.size() << " fixtures x " << kPrimesPerFixture << " primes";
    // determinism across worker counts
    auto fx = fixtures::eisenstein_gauss();
    auto cfg = make_config(fx.poly, fixture_basis(fx));
    cfg.X = 400000;
    cfg.moduli = {2, 3};
    cfg.regions = {parse_region("x1 < 1/3", 4)};
    std::string first;
    for (int w : {1, 4, 16}) {
        cfg.workers = w;
        auto c = run_survey(cfg);
        auto vt = compute_volumes(cfg.basis, cfg.ghat, {}, cfg.regions, true);
        Report R = conjecture_report(c, cfg, vt, "X");
        R.append(conjecture3_report(c, observed_r_sets(c, cfg, cfg.X), "X"));
        std::string csv = R.to_csv();
        if (w == 1) first = csv;
        out.require(csv == first, "CSV identical at " + std::to_string(w) + " workers");
    }
    out.detail << "; CSV identical at 1, 4, 16 workers";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"quadratic survey tables", quadratic_tables}, {"sextic coset densities and volumes", sextic_cosets},
        {"octic coset volumes and frequencies", octic_cosets}, {"group fixtures and volume sum", group_fixtures},
        {"relation bases", relation_bases},          {"closed-form densities", closed_forms},
        {"decimal period split", decimal_suite},     {"structural invariants at scale", structural},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << " [exception: " << e.what() << "]";
        }
        failed += !out.pass;
        std::cout << (out.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ":" << out.detail.str() << " ("
                  << fmt(seconds_since(t0), 1) << "s)" << std::endl;
    }
    std::cout << (failed ? "FAILED " : "ALL PASS ") << criteria.size() - failed << "/" << criteria.size() << std::endl;
    return failed ? 1 : 0;
}
