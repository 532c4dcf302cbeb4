// sroot: relations among polynomial roots, sorted-root statistics over split primes.
//
// Commands: analyze | survey | volumes | formulas | decimal | report-merge.
// Exit codes: 0 ok, 2 config error, 3 computation error, 4 fixture mismatch.

#include "sroot/decimal.hpp"
#include "sroot/formulas.hpp"
#include "sroot/geometry.hpp"
#include "sroot/groups.hpp"
#include "sroot/poly.hpp"
#include "sroot/relations.hpp"
#include "sroot/survey.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using namespace sroot;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;
constexpr int kExitMismatch = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FixtureMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------- schema ----------

const std::set<std::string> kPolyKeys = {"poly", "poly_file", "numbering", "rows", "precision", "degree_bound", "max_coeff_bits"};

const std::map<std::string, std::set<std::string>> kCommandKeys = {
    {"analyze", {"sigmas", "regions", "max_cosets", "output"}},
    {"volumes", {"sigmas", "regions", "max_cosets", "output"}},
    {"survey",
     {"m", "X", "start", "moduli", "regions", "a_grid", "root_expressions", "workers", "checkpoint", "checkpoint_every", "resume",
      "csv", "json", "artin_X", "check"}},
    {"formulas", {"dtable", "identities", "eulerian", "format"}},
    {"decimal", {"fraction", "n", "format"}},
    {"report-merge", {"inputs", "output", "csv", "artin_X"}},
};

bool uses_poly(const std::string& cmd) { return cmd == "analyze" || cmd == "volumes" || cmd == "survey"; }

void validate_keys(const json& j, const std::string& cmd) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    const auto& allowed = kCommandKeys.at(cmd);
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            if (!value.is_string() || value.get<std::string>() != cmd)
                throw ConfigError("config is for command '" + value.dump() + "', not '" + cmd + "'");
            continue;
        }
        if (allowed.count(key) || (uses_poly(cmd) && kPolyKeys.count(key))) continue;
        throw ConfigError("unknown config key '" + key + "' for command " + cmd);
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// ---------- value parsing ----------

std::string trim(std::string s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

// Accepts 100000, 1e7, "1e7", "100000".
u64 as_u64(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<u64>();
    if (v.is_number_integer()) {
        if (v.get<long long>() < 0) throw ConfigError(key + " must be nonnegative");
        return static_cast<u64>(v.get<long long>());
    }
    double d = 0;
    if (v.is_number_float()) {
        d = v.get<double>();
    } else if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.find_first_of("eE.") == std::string::npos) {
            try {
                std::size_t pos = 0;
                u64 r = std::stoull(s, &pos);
                if (pos == s.size()) return r;
            } catch (const std::exception&) {
            }
            throw ConfigError(key + ": not an integer: " + s);
        }
        try {
            std::size_t pos = 0;
            d = std::stod(s, &pos);
            if (pos != s.size()) throw ConfigError(key + ": not a number: " + s);
        } catch (const std::logic_error&) {
            throw ConfigError(key + ": not a number: " + s);
        }
    } else {
        throw ConfigError(key + " must be a number");
    }
    if (d < 0 || d > 1.8e19 || d != std::floor(d)) throw ConfigError(key + " must be a nonnegative integer");
    return static_cast<u64>(d);
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError(key + " must be an integer");
    return v.get<int>();
}

std::vector<std::string> as_strings(const json& v, const std::string& key) {
    if (v.is_string()) return {v.get<std::string>()};
    if (!v.is_array()) throw ConfigError(key + " must be a list of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) throw ConfigError(key + " must be a list of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::vector<int> as_ints(const json& v, const std::string& key) {
    if (v.is_number_integer()) return {v.get<int>()};
    if (!v.is_array()) throw ConfigError(key + " must be a list of integers");
    std::vector<int> out;
    for (const auto& e : v) out.push_back(as_int(e, key));
    return out;
}

Perm as_perm(const json& v, int n) {
    Perm p;
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        for (char& c : s)
            if (c == '[' || c == ']') c = ' ';
        for (const auto& part : split(s, ',')) p.push_back(std::stoi(part));
    } else {
        p = as_ints(v, "sigmas");
    }
    if (static_cast<int>(p.size()) != n || !is_perm(p)) throw ConfigError("not a permutation of 1.." + std::to_string(n) + ": " + v.dump());
    return p;
}

// "5", 5, "5..7", [5, 7]
std::pair<int, int> as_m_range(const json& v) {
    if (v.is_number_integer()) return {v.get<int>(), v.get<int>()};
    if (v.is_array() && v.size() == 2) return {as_int(v[0], "m"), as_int(v[1], "m")};
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        auto dots = s.find("..");
        try {
            if (dots == std::string::npos) return {std::stoi(s), std::stoi(s)};
            return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
        } catch (const std::logic_error&) {
        }
    }
    throw ConfigError("m must be an integer or a range lo..hi");
}

std::vector<std::complex<double>> as_numbering(const json& v) {
    if (!v.is_array()) throw ConfigError("numbering must be a list of roots");
    std::vector<std::complex<double>> out;
    for (const auto& e : v) {
        if (e.is_number()) out.emplace_back(e.get<double>(), 0.0);
        else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
            out.emplace_back(e[0].get<double>(), e[1].get<double>());
        else
            throw ConfigError("numbering entries are numbers or [re, im] pairs");
    }
    return out;
}

// "re,im;re,im;..."
json numbering_from_text(const std::string& text) {
    json arr = json::array();
    for (const auto& item : split(text, ';')) {
        auto parts = split(item, ',');
        if (parts.empty() || parts.size() > 2) throw ConfigError("numbering: expected re,im; got '" + item + "'");
        try {
            arr.push_back({std::stod(parts[0]), parts.size() == 2 ? std::stod(parts[1]) : 0.0});
        } catch (const std::logic_error&) {
            throw ConfigError("numbering: not a number in '" + item + "'");
        }
    }
    return arr;
}

IntMat as_rows(const json& v, int n) {
    if (!v.is_array()) throw ConfigError("rows must be a list of integer lists");
    IntMat rows;
    for (const auto& r : v) {
        if (!r.is_array() || static_cast<int>(r.size()) != n + 1)
            throw ConfigError("each relation row needs n+1 = " + std::to_string(n + 1) + " entries");
        IntVec row;
        for (const auto& x : r) {
            if (x.is_number_integer()) row.push_back(Int(x.get<long long>()));
            else if (x.is_string()) row.push_back(Int(x.get<std::string>()));
            else throw ConfigError("relation entries must be integers");
        }
        rows.push_back(row);
    }
    return rows;
}

json perm_list(const std::vector<Perm>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back(p);
    return a;
}

json surd_json(const SurdValue& v) {
    json j = v.to_json();
    j["text"] = v.to_string();
    j["value"] = v.to_double();
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

// ---------- polynomial, basis and groups ----------

struct Problem {
    IntPolynomial f;
    RelationBasis basis;
    PermSet ghat, g;
    bool rows_given = false;
};

IntPolynomial read_poly(const json& c) {
    std::string text;
    if (c.contains("poly")) {
        if (!c["poly"].is_string()) throw ConfigError("poly must be a string");
        text = c["poly"].get<std::string>();
    } else if (c.contains("poly_file")) {
        std::ifstream in(c["poly_file"].get<std::string>());
        if (!in) throw ConfigError("cannot open poly_file");
        std::stringstream ss;
        ss << in.rdbuf();
        text = trim(ss.str());
    } else {
        throw ConfigError("no polynomial: give poly or poly_file");
    }
    try {
        return IntPolynomial::parse(text);
    } catch (const Error& e) {
        throw ConfigError("poly: " + std::string(e.what()));
    }
}

Problem build_problem(const json& c) {
    Problem P;
    P.f = read_poly(c);
    const int n = P.f.degree();
    if (n < 1) throw ConfigError("polynomial must have positive degree");
    DetectOptions opt;
    if (c.contains("precision")) opt.precision_bits = static_cast<unsigned>(as_int(c["precision"], "precision"));
    if (c.contains("max_coeff_bits")) opt.max_coeff_bits = static_cast<unsigned>(as_int(c["max_coeff_bits"], "max_coeff_bits"));
    if (c.contains("degree_bound")) opt.degree_bound = Int(as_u64(c["degree_bound"], "degree_bound"));
    if (c.contains("rows")) {
        IntMat rows = as_rows(c["rows"], n);
        P.basis = basis_from_rows(n, rows);
        // keep the rows as written when they already form a basis of the saturated lattice, so k-vectors read as stated
        if (lattice::hnf(rows) == P.basis.rows && rows.size() == P.basis.rows.size())
            P.basis.rows = rows;
        else
            std::cerr << "[sroot] rows do not span a saturated lattice; using its reduced basis\n";
        P.rows_given = true;
    } else {
        std::cerr << "[sroot] isolating roots and detecting relations\n";
        RootSet rs = complex_roots(P.f, opt.precision_bits);
        if (c.contains("numbering")) {
            auto vals = as_numbering(c["numbering"]);
            if (static_cast<int>(vals.size()) != n) throw ConfigError("numbering needs one value per root");
            rs = rs.numbered_like(vals);
        }
        P.basis = detect_relations(rs, opt);
    }
    P.ghat = compute_ghat(P.basis);
    P.g = compute_g(P.basis);
    return P;
}

json basis_json(const Problem& P) {
    json j = P.basis.to_json();
    j["source"] = P.rows_given ? "rows" : "detected";
    json certs = json::array();
    for (const auto& c : P.basis.certification)
        certs.push_back({{"status", to_string(c.status)},
                         {"precision_used", c.precision_used},
                         {"degree_bound_used", c.degree_bound_used.str()},
                         {"defect_bound", c.defect_bound.str()}});
    j["certification"] = certs;
    if (!P.basis.note.empty()) j["note"] = P.basis.note;
    return j;
}

std::vector<RegionSpec> read_regions(const json& c, int n) {
    std::vector<RegionSpec> out;
    if (!c.contains("regions")) return out;
    for (const auto& text : as_strings(c["regions"], "regions")) {
        try {
            out.push_back(parse_region(text, n));
        } catch (const Error& e) {
            throw ConfigError("region '" + text + "': " + e.what());
        }
    }
    return out;
}

// Requested coset reps, or every coset when there are at most max_cosets of them.
std::vector<Perm> requested_reps(const json& c, const Problem& P, bool& all) {
    std::vector<Perm> reps;
    all = false;
    if (c.contains("sigmas")) {
        if (!c["sigmas"].is_array()) throw ConfigError("sigmas must be a list of permutations");
        for (const auto& s : c["sigmas"]) reps.push_back(coset_rep(as_perm(s, P.basis.n), P.ghat));
        return reps;
    }
    u64 max_cosets = c.contains("max_cosets") ? as_u64(c["max_cosets"], "max_cosets") : 120;
    u64 count = static_cast<u64>(factorial(P.basis.n) / Int(P.ghat.size()));
    if (count <= max_cosets) {
        all = true;
        return all_coset_reps(P.ghat);
    }
    return reps;
}

json coset_table(const Problem& P, const VolumeTable& vt, const std::vector<Perm>& reps, const std::vector<RegionSpec>& regions) {
    json rows = json::array();
    std::set<Perm> wanted(reps.begin(), reps.end());
    for (const auto& [rep, cv] : vt.cosets) {
        if (!wanted.count(rep) && !vt.all_cosets) continue;
        json r{{"sigma", rep}, {"domain_volume", surd_json(cv.domain)}, {"share", vt.total > 0 ? cv.domain.to_double() / vt.total : 0.0}};
        json ks = json::array();
        for (const auto& [k, v] : cv.per_k) ks.push_back({{"k", k}, {"volume", surd_json(v)}});
        r["per_k"] = ks;
        if (!regions.empty()) {
            json rg = json::array();
            for (std::size_t i = 0; i < regions.size(); ++i) {
                json e{{"region", regions[i].text}, {"volume", surd_json(cv.regions[i])}};
                if (!cv.domain.is_zero()) e["ratio"] = cv.regions[i].ratio(cv.domain).str();
                rg.push_back(e);
            }
            r["regions"] = rg;
        }
        rows.push_back(r);
    }
    (void)P;
    return rows;
}

// ---------- commands ----------

int cmd_analyze(const json& c, bool volumes_only) {
    Problem P = build_problem(c);
    const int n = P.basis.n;
    auto regions = read_regions(c, n);
    bool all = false;
    auto reps = requested_reps(c, P, all);
    json out;
    out["command"] = volumes_only ? "volumes" : "analyze";
    out["poly"] = P.f.to_string();
    out["n"] = n;
    out["t"] = P.basis.t();
    if (!volumes_only) {
        out["basis"] = basis_json(P);
        out["ghat"] = {{"order", P.ghat.size()}, {"elements", perm_list(P.ghat.elements)}};
        out["g"] = {{"order", P.g.size()}, {"elements", perm_list(P.g.elements)}};
        out["ghat_equals_g"] = P.ghat.elements == P.g.elements;
    }
    const Int coset_count = factorial(n) / Int(P.ghat.size());
    out["coset_count"] = coset_count.str();
    const bool degenerate = P.basis.t() == n;
    if (degenerate) {
        out["notes"].push_back("t = n: every relation form is fixed, so the domains have no volume");
    } else if (!reps.empty() || all) {
        std::cerr << "[sroot] computing " << (all ? "all " : "") << reps.size() << " coset volume(s)\n";
        VolumeTable vt = compute_volumes(P.basis, P.ghat, reps, regions);
        all = all || vt.all_cosets;
        out["cosets"] = coset_table(P, vt, reps, regions);
        out["cosets_complete"] = all;
        out["normalizing_total"] = vt.total;
        if (all && !volumes_only) {
            // sum over S_n = #G-hat * sum over coset reps
            json id{{"sqrt_det", surd_json(gram_sqrt(P.basis))}, {"no_rational_root_difference", !has_rational_difference(P.basis)}};
            try {
                SurdValue sum;
                for (const auto& [rep, cv] : vt.cosets) sum += cv.domain;
                sum = sum * Rat(static_cast<long>(P.ghat.size()));
                id["sum_over_sn"] = surd_json(sum);
                id["holds"] = sum == gram_sqrt(P.basis);
            } catch (const Error& e) {
                id["sum_over_sn"] = e.what();
                id["holds"] = false;
            }
            out["volume_sum_identity"] = id;
        }
    } else {
        out["notes"].push_back("coset count " + coset_count.str() + " exceeds max_cosets; pass sigmas or raise max_cosets");
    }
    if (!volumes_only) {
        out["sqrt_det"] = surd_json(gram_sqrt(P.basis));
        if (!degenerate) out["conjectured_c"] = surd_json(conjectured_c(P.basis, P.ghat));
    }
    write_text(c.value("output", std::string()), out.dump(2) + "\n");
    return kExitOk;
}

SurveyConfig survey_config_from_identity(const json& id) {
    SurveyConfig cfg;
    cfg.f = IntPolynomial::parse(id.at("f").get<std::string>());
    cfg.basis = RelationBasis::from_json(id.at("basis"));
    cfg.ghat = compute_ghat(cfg.basis);
    cfg.g = compute_g(cfg.basis);
    cfg.X = id.at("X").get<u64>();
    cfg.start = id.at("start").get<u64>();
    cfg.moduli = id.at("moduli").get<std::vector<int>>();
    for (const auto& r : id.at("regions")) cfg.regions.push_back(parse_region(r.get<std::string>(), cfg.basis.n));
    for (const auto& a : id.at("a_grid")) cfg.a_grid.push_back(parse_rat(a.get<std::string>()));
    cfg.root_expressions = id.at("root_expressions").get<std::vector<std::string>>();
    return cfg;
}

// Coset and residue reports for one snapshot of the counters.
Report build_report(const SurveyCounters& c, const SurveyConfig& cfg, const VolumeTable& vt, const std::string& label, u64 artin_X) {
    Report R = conjecture_report(c, cfg, vt, label);
    if (!cfg.moduli.empty()) R.append(conjecture3_report(c, observed_r_sets(c, cfg, artin_X), label));
    return R;
}

VolumeTable volumes_for(const SurveyConfig& cfg, const SurveyCounters& c) {
    std::vector<Perm> reps;
    for (const auto& [rep, cnt] : c.per_coset) reps.push_back(rep);
    std::cerr << "[sroot] exact volumes for " << reps.size() << " observed coset(s)\n";
    return compute_volumes(cfg.basis, cfg.ghat, reps, cfg.regions);
}

// golden: {"rows": [{"table", "m_or_X", "key", "value", "tol"}]}; compares diff, or empirical when diff is empty
void check_golden(const Report& R, const std::string& path) {
    json g = load_json_file(path);
    if (!g.contains("rows") || !g["rows"].is_array()) throw ConfigError(path + ": golden file needs a rows list");
    int bad = 0;
    for (const auto& row : g["rows"]) {
        const std::string table = row.at("table").get<std::string>();
        const std::string label = row.value("m_or_X", std::string());
        const std::string key = row.value("key", std::string());
        const double want = row.at("value").get<double>(), tol = row.at("tol").get<double>();
        std::optional<double> got;
        for (const auto& r : R.rows)
            if (r.table == table && (label.empty() || r.m_or_X == label) && (key.empty() || r.key == key)) {
                got = r.diff ? *r.diff : r.empirical;
                break;
            }
        const bool ok = got && std::abs(*got - want) <= tol;
        bad += !ok;
        std::cerr << (ok ? "[check] ok   " : "[check] FAIL ") << table << " " << label << " " << key << ": got "
                  << (got ? Report::num(*got) : std::string("missing")) << ", want " << want << " +- " << tol << "\n";
    }
    if (bad) throw FixtureMismatch(std::to_string(bad) + " golden row(s) out of tolerance");
}

int cmd_survey(const json& c) {
    Problem P = build_problem(c);
    const int n = P.basis.n;
    SurveyConfig base;
    base.f = P.f;
    base.basis = P.basis;
    base.ghat = P.ghat;
    base.g = P.g;
    base.regions = read_regions(c, n);
    if (c.contains("moduli")) base.moduli = as_ints(c["moduli"], "moduli");
    for (int L : base.moduli)
        if (L < 2) throw ConfigError("moduli must be >= 2");
    if (c.contains("a_grid")) {
        for (const auto& a : as_strings(c["a_grid"], "a_grid")) base.a_grid.push_back(parse_rat(a));
    } else if (P.basis.t() == 1) {
        base.a_grid = default_a_grid(n);
    }
    if (c.contains("root_expressions")) base.root_expressions = as_strings(c["root_expressions"], "root_expressions");
    if (c.contains("workers")) base.workers = as_int(c["workers"], "workers");
    if (base.workers < 1 || base.workers > 256) throw ConfigError("workers must lie in 1..256");
    if (c.contains("checkpoint")) base.checkpoint_path = c["checkpoint"].get<std::string>();
    if (c.contains("checkpoint_every")) base.checkpoint_every = as_u64(c["checkpoint_every"], "checkpoint_every");
    if (base.checkpoint_every > 0 && base.checkpoint_path.empty()) throw ConfigError("checkpoint_every needs a checkpoint path");
    const bool resume = c.value("resume", false);
    if (resume && base.checkpoint_path.empty()) throw ConfigError("resume needs a checkpoint path");
    base.start = c.contains("start") ? as_u64(c["start"], "start") : 0;

    // survey targets: (label, X)
    std::vector<std::pair<std::string, u64>> targets;
    if (c.contains("m") == c.contains("X")) throw ConfigError("give exactly one of m and X");
    if (c.contains("m")) {
        auto [lo, hi] = as_m_range(c["m"]);
        if (lo < 1 || hi > 12 || lo > hi) throw ConfigError("m range must lie in 1..12");
        for (int m = lo; m <= hi; ++m) targets.emplace_back("m=" + std::to_string(m), threshold_for_m(P.f, m));
    } else {
        u64 X = as_u64(c["X"], "X");
        targets.emplace_back("X=" + std::to_string(X), X);
    }
    if (targets.front().second <= base.start) throw ConfigError("survey bound must exceed start");

    std::vector<SurveyCounters> snapshots;
    std::vector<SurveyConfig> cfgs;
    SurveyCounters total;
    u64 lo = base.start;
    for (const auto& [label, X] : targets) {
        SurveyConfig seg = base;
        seg.start = lo;
        seg.X = X;
        if (targets.size() > 1 && !seg.checkpoint_path.empty()) seg.checkpoint_path += "." + label.substr(label.find('=') + 1);
        auto t0 = std::chrono::steady_clock::now();
        std::cerr << "[sroot] survey " << label << ": primes in (" << lo << ", " << X << "]\n";
        auto progress = [&](u64 upto, u64 end, const SurveyCounters& cnt) {
            std::cerr << "[sroot]   p <= " << upto << " / " << end << ", split primes " << cnt.total_split << "\n";
        };
        total.merge(run_survey(seg, resume, progress));
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "[sroot]   " << total.total_split << " split primes so far, " << secs << " s\n";
        SurveyConfig cum = base;
        cum.X = X;
        cfgs.push_back(cum);
        snapshots.push_back(total);
        lo = X;
    }

    VolumeTable vt = volumes_for(base, total);
    const u64 artin_X = c.contains("artin_X") ? as_u64(c["artin_X"], "artin_X") : std::min<u64>(targets.back().second, 2000000);
    Report all;
    json runs = json::array();
    for (std::size_t i = 0; i < targets.size(); ++i) {
        Report R = build_report(snapshots[i], cfgs[i], vt, targets[i].first, artin_X);
        for (const auto& note : R.notes) std::cerr << "[sroot] note (" << targets[i].first << "): " << note << "\n";
        runs.push_back({{"label", targets[i].first},
                        {"identity", cfgs[i].identity_json()},
                        {"config_hash", cfgs[i].hash()},
                        {"counters", snapshots[i].to_json()},
                        {"report", R.to_json()}});
        all.append(R);
    }
    write_text(c.value("csv", std::string()), all.to_csv());
    if (c.contains("json")) write_text(c["json"].get<std::string>(), json{{"resolved_config", c}, {"runs", runs}}.dump(2) + "\n");
    if (c.contains("check")) check_golden(all, c["check"].get<std::string>());
    return kExitOk;
}

std::string fmt_rat(const Rat& r) { return r.str(); }

int cmd_formulas(const json& c) {
    const bool as_json = c.value("format", std::string("text")) == "json";
    if (!c.contains("dtable") && !c.contains("identities") && !c.contains("eulerian"))
        throw ConfigError("formulas needs one of dtable, identities, eulerian");
    json out;
    std::ostringstream text;
    int status = kExitOk;
    if (c.contains("dtable")) {
        int n = 0;
        const json& v = c["dtable"];
        if (v.is_string()) {
            std::string s = v.get<std::string>();
            if (s.rfind("n=", 0) == 0) s = s.substr(2);
            try {
                n = std::stoi(s);
            } catch (const std::logic_error&) {
                throw ConfigError("dtable expects n or n=<int>");
            }
        } else {
            n = as_int(v, "dtable");
        }
        if (n < 2 || n > 12) throw ConfigError("dtable needs 2 <= n <= 12");
        json tab = json::array();
        for (int i = 1; i <= n; ++i) {
            text << "D(a," << i << ";" << n << ")\n";
            for (const auto& b : formulas::piecewise_branches(i, n)) {
                text << "  " << fmt_rat(b.lo) << " < a <= " << fmt_rat(b.hi) << ": " << b.to_string() << "\n";
                json coeffs = json::array();
                for (const auto& q : b.coeffs) coeffs.push_back(q.str());
                tab.push_back({{"i", i}, {"lo", b.lo.str()}, {"hi", b.hi.str()}, {"poly", b.to_string()}, {"coeffs", coeffs}});
            }
        }
        out["dtable"] = {{"n", n}, {"branches", tab}};
    }
    if (c.contains("eulerian")) {
        int n = as_int(c["eulerian"], "eulerian");
        if (n < 1 || n > 30) throw ConfigError("eulerian needs 1 <= n <= 30");
        json rows = json::array();
        for (int m = 1; m <= n; ++m) {
            json row = json::array();
            text << "A(" << m << ",k):";
            for (int k = 1; k <= m; ++k) {
                Int a = formulas::eulerian(m, k);
                row.push_back(a.str());
                text << " " << a;
            }
            text << "\n";
            rows.push_back(row);
        }
        out["eulerian"] = rows;
    }
    if (c.contains("identities")) {
        int n_max = c["identities"].is_boolean() ? 12 : as_int(c["identities"], "identities");
        auto rep = formulas::identity_suite(n_max);
        json checks = json::array();
        int failed = 0;
        for (const auto& ch : rep.checks) {
            checks.push_back({{"identity", ch.identity}, {"n", ch.n}, {"param", ch.param}, {"passed", ch.passed}});
            failed += !ch.passed;
            if (!ch.passed) text << "FAIL " << ch.identity << " n=" << ch.n << " param=" << ch.param << "\n";
        }
        text << "identities n <= " << n_max << ": " << rep.checks.size() - failed << "/" << rep.checks.size()
             << (failed ? " passed, FAILURES present\n" : " passed, all pass\n");
        out["identities"] = {{"n_max", n_max}, {"all_passed", rep.all_passed()}, {"checks", checks}};
        if (failed) status = kExitCompute;
    }
    std::cout << (as_json ? out.dump(2) + "\n" : text.str());
    return status;
}

int cmd_decimal(const json& c) {
    if (!c.contains("fraction")) throw ConfigError("decimal needs a fraction a/b");
    const std::string frac = c["fraction"].get<std::string>();
    auto slash = frac.find('/');
    if (slash == std::string::npos) throw ConfigError("fraction must look like a/b");
    u64 a = 0, b = 0;
    try {
        a = std::stoull(frac.substr(0, slash));
        b = std::stoull(frac.substr(slash + 1));
    } catch (const std::logic_error&) {
        throw ConfigError("fraction must look like a/b");
    }
    u64 n = c.contains("n") ? as_u64(c["n"], "n") : 2;
    auto ps = decimal::period_split(a, b, n);
    if (c.value("format", std::string("text")) == "json") {
        std::cout << json{{"a", a}, {"b", b}, {"n", n}, {"period_length", ps.e}, {"block_length", ps.l}, {"L", ps.L}, {"B", ps.B},
                          {"blocks", ps.blocks}, {"k", ps.k}, {"display", ps.display()}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << ps.display() << ", k=" << ps.k << "\n";
    }
    return kExitOk;
}

// Merges survey results over adjacent prime ranges of the same configuration.
int cmd_report_merge(const json& c) {
    if (!c.contains("inputs")) throw ConfigError("report-merge needs input files");
    std::vector<std::pair<json, SurveyCounters>> parts;
    for (const auto& path : as_strings(c["inputs"], "inputs")) {
        json j = load_json_file(path);
        if (j.contains("runs")) {
            if (j["runs"].empty()) throw ConfigError(path + ": no runs");
            j = j["runs"].back();
        }
        if (!j.contains("identity") || !j.contains("counters")) throw ConfigError(path + ": expected survey JSON with identity and counters");
        parts.emplace_back(j["identity"], SurveyCounters::from_json(j["counters"]));
    }
    std::sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) { return x.first["start"].template get<u64>() < y.first["start"].template get<u64>(); });
    auto strip = [](json id) {
        id.erase("start");
        id.erase("X");
        return id;
    };
    json id = parts.front().first;
    SurveyCounters total = parts.front().second;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (strip(parts[i].first) != strip(id)) throw ConfigError("inputs were produced by different configurations");
        if (parts[i].first["start"].get<u64>() != id["X"].get<u64>())
            throw ConfigError("input ranges are not adjacent: gap or overlap at " + id["X"].dump());
        total.merge(parts[i].second);
        id["X"] = parts[i].first["X"];
    }
    SurveyConfig cfg = survey_config_from_identity(id);
    const std::string label = "X=" + std::to_string(cfg.X);
    VolumeTable vt = volumes_for(cfg, total);
    const u64 artin_X = c.contains("artin_X") ? as_u64(c["artin_X"], "artin_X") : std::min<u64>(cfg.X, 2000000);
    Report R = build_report(total, cfg, vt, label, artin_X);
    if (c.contains("csv")) write_text(c["csv"].get<std::string>(), R.to_csv());
    json out{{"label", label}, {"identity", id}, {"config_hash", cfg.hash()}, {"counters", total.to_json()}, {"report", R.to_json()}};
    write_text(c.value("output", std::string()), out.dump(2) + "\n");
    return kExitOk;
}

// ---------- command-line plumbing ----------

// One command: CLI flags write into the resolved config only when given.
class Command {
public:
    Command(CLI::App& app, std::string name, const std::string& desc) : name_(std::move(name)) {
        sub_ = app.add_subcommand(name_, desc);
        sub_->add_option("--config", config_path_, "JSON config file; flags override its values");
        sub_->add_flag("--emit-fixture", emit_, "print the resolved config as JSON and exit");
    }

    CLI::App* app() { return sub_; }
    const std::string& name() const { return name_; }
    bool emit() const { return emit_; }

    void str(const std::string& flag, const std::string& key, const std::string& desc) {
        auto v = std::make_shared<std::string>();
        add(sub_->add_option(flag, *v, desc), key, [v] { return json(*v); });
    }
    void integer(const std::string& flag, const std::string& key, const std::string& desc) {
        auto v = std::make_shared<long long>();
        add(sub_->add_option(flag, *v, desc), key, [v] { return json(*v); });
    }
    void strings(const std::string& flag, const std::string& key, const std::string& desc) {
        auto v = std::make_shared<std::vector<std::string>>();
        add(sub_->add_option(flag, *v, desc), key, [v] { return json(*v); });
    }
    void ints(const std::string& flag, const std::string& key, const std::string& desc) {
        auto v = std::make_shared<std::vector<int>>();
        add(sub_->add_option(flag, *v, desc)->delimiter(','), key, [v] { return json(*v); });
    }
    void flag(const std::string& flag, const std::string& key, const std::string& desc) {
        auto v = std::make_shared<bool>(false);
        add(sub_->add_flag(flag, *v, desc), key, [v] { return json(*v); });
    }
    void custom(const std::string& flag, const std::string& key, const std::string& desc, std::function<json(const std::string&)> conv) {
        auto v = std::make_shared<std::string>();
        add(sub_->add_option(flag, *v, desc), key, [v, conv] { return conv(*v); });
    }

    json resolve() const {
        json c = config_path_.empty() ? json::object() : load_json_file(config_path_);
        validate_keys(c, name_);
        for (const auto& b : bindings_)
            if (b.opt->count() > 0) c[b.key] = b.value();
        c["command"] = name_;
        validate_keys(c, name_);
        return c;
    }

private:
    struct Binding {
        std::string key;
        CLI::Option* opt;
        std::function<json()> value;
    };

    void add(CLI::Option* opt, const std::string& key, std::function<json()> value) { bindings_.push_back({key, opt, std::move(value)}); }

    std::string name_;
    CLI::App* sub_ = nullptr;
    std::string config_path_;
    bool emit_ = false;
    std::vector<Binding> bindings_;
};

json parse_json_text(const std::string& s) {
    try {
        return json::parse(s);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("not valid JSON: ") + e.what());
    }
}

void add_poly_options(Command& cmd) {
    cmd.str("poly", "poly", "polynomial, e.g. \"x^2 + 1\"");
    cmd.str("--poly-file", "poly_file", "file holding the polynomial");
    cmd.custom("--numbering", "numbering", "root values re,im;re,im;... fixing alpha_1..alpha_n", numbering_from_text);
    cmd.custom("--rows", "rows", "relation rows as JSON, e.g. [[1,1,0]]; skips detection", parse_json_text);
    cmd.integer("--precision", "precision", "starting precision in bits for root isolation");
    cmd.integer("--degree-bound", "degree_bound", "degree bound for relation certification");
    cmd.integer("--max-coeff-bits", "max_coeff_bits", "coefficient bound (bits) for relation search");
}

void add_coset_options(Command& cmd) {
    cmd.custom("--sigma", "sigmas", "coset representative, e.g. 1,2,4,6,5,3 (repeatable via config)", [](const std::string& s) {
        json a = json::array();
        a.push_back(s);
        return a;
    });
    cmd.strings("--region", "regions", "linear region on (x1..xn), e.g. \"x1 < 1/3\" (repeatable)");
    cmd.integer("--max-cosets", "max_cosets", "compute every coset when there are at most this many (default 120)");
    cmd.str("--output", "output", "write JSON here instead of standard output");
}

void print_error(const std::string& kind, const std::string& message, int code, const std::string& hint = "") {
    json e{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (!hint.empty()) e["hint"] = hint;
    std::cerr << e.dump() << "\n";
}

// Errors caused by the inputs rather than by the computation.
bool is_input_error(const std::string& kind) {
    static const std::set<std::string> kinds = {"ParseError", "InvalidConfig", "OutOfRange", "NotCoprime", "DoesNotDivide", "CheckpointMismatch"};
    return kinds.count(kind) > 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sorted roots of polynomials modulo split primes"};
    app.require_subcommand(1);
    std::vector<std::unique_ptr<Command>> cmds;
    auto make = [&](const std::string& name, const std::string& desc) -> Command& {
        cmds.push_back(std::make_unique<Command>(app, name, desc));
        return *cmds.back();
    };

    auto& analyze = make("analyze", "relation basis, groups, coset volumes and the conjectured constant");
    add_poly_options(analyze);
    add_coset_options(analyze);

    auto& volumes = make("volumes", "exact domain, per-k and region volumes for coset representatives");
    add_poly_options(volumes);
    add_coset_options(volumes);

    auto& survey = make("survey", "sorted-root statistics over split primes");
    add_poly_options(survey);
    survey.str("--m", "m", "X is the smallest split prime above 10^m; a range like 5..7 reports each m");
    survey.str("--X", "X", "survey split primes p <= X (accepts 1e7)");
    survey.str("--start", "start", "survey split primes p > start");
    survey.ints("--L", "moduli", "moduli for residue patterns (repeatable or comma separated)");
    survey.strings("--region", "regions", "linear region on (r1/p..rn/p) (repeatable)");
    survey.custom("--a-grid", "a_grid", "comma separated thresholds for the root histogram",
                  [](const std::string& s) { return json(split(s, ',')); });
    survey.strings("--root-expr", "root_expressions", "alpha_i as a polynomial in a root of f (repeatable, for M_mu)");
    survey.integer("--workers", "workers", "worker threads");
    survey.str("--checkpoint", "checkpoint", "checkpoint file");
    survey.str("--checkpoint-every", "checkpoint_every", "split primes between checkpoints");
    survey.flag("--resume", "resume", "continue from the checkpoint");
    survey.str("--csv", "csv", "write CSV here instead of standard output");
    survey.str("--json", "json", "write the JSON report with counters here");
    survey.str("--artin-X", "artin_X", "prime bound for the Artin subgroup samples");
    survey.str("--check", "check", "golden table JSON; exit 4 on mismatch");

    auto& form = make("formulas", "closed-form densities, Eulerian numbers and identity checks");
    form.str("--dtable", "dtable", "piecewise densities D(a,i;n), e.g. n=3");
    form.integer("--eulerian", "eulerian", "Eulerian numbers A(m,k) for m <= n");
    form.custom("--identities", "identities", "identity suite up to n_max (default 12)", [](const std::string& s) {
        if (s.empty()) return json(true);
        try {
            return json(std::stoi(s));
        } catch (const std::logic_error&) {
            throw ConfigError("identities expects an integer");
        }
    });
    form.app()->get_option("--identities")->expected(0, 1);
    form.str("--format", "format", "text or json");

    auto& dec = make("decimal", "split the decimal period of a/b into n blocks");
    dec.str("fraction", "fraction", "a/b");
    dec.str("--n", "n", "number of blocks");
    dec.str("--format", "format", "text or json");

    auto& merge = make("report-merge", "merge survey results over adjacent prime ranges");
    merge.strings("inputs", "inputs", "survey JSON files");
    merge.str("--output", "output", "merged JSON destination");
    merge.str("--csv", "csv", "write the merged report CSV here");
    merge.str("--artin-X", "artin_X", "prime bound for the Artin subgroup samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        print_error("UsageError", e.what(), kExitConfig, "run with --help");
        return kExitConfig;
    }

    for (auto& cmd : cmds) {
        if (!cmd->app()->parsed()) continue;
        try {
            json c = cmd->resolve();
            if (cmd->emit()) {
                std::cout << c.dump(2) << "\n";
                return kExitOk;
            }
            const std::string& name = cmd->name();
            if (name == "analyze") return cmd_analyze(c, false);
            if (name == "volumes") return cmd_analyze(c, true);
            if (name == "survey") return cmd_survey(c);
            if (name == "formulas") return cmd_formulas(c);
            if (name == "decimal") return cmd_decimal(c);
            return cmd_report_merge(c);
        } catch (const ConfigError& e) {
            print_error("ConfigError", e.what(), kExitConfig, "see " + cmd->name() + " --help");
            return kExitConfig;
        } catch (const json::exception& e) {
            print_error("ConfigError", e.what(), kExitConfig, "check value types in the config");
            return kExitConfig;
        } catch (const FixtureMismatch& e) {
            print_error("FixtureMismatch", e.what(), kExitMismatch);
            return kExitMismatch;
        } catch (const Error& e) {
            const bool input = is_input_error(e.kind());
            print_error(e.kind(), e.what(), input ? kExitConfig : kExitCompute, input ? "see " + cmd->name() + " --help" : "");
            return input ? kExitConfig : kExitCompute;
        } catch (const std::exception& e) {
            print_error("InternalError", e.what(), kExitCompute);
            return kExitCompute;
        }
    }
    return kExitConfig;
}
