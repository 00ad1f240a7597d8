#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "analysis.hpp"
#include "render.hpp"

namespace ctab {

constexpr int kHardCap = 12;
constexpr int kSchemaVersion = 1;

enum class Check { Vanishing, Weierstrass, Covering, Dimension, Injectivity, Orbital };

inline const std::vector<std::pair<Check, std::string>>& check_names() {
    static const std::vector<std::pair<Check, std::string>> names{
        {Check::Vanishing, "vanishing"}, {Check::Weierstrass, "weierstrass"}, {Check::Covering, "covering"},
        {Check::Dimension, "dimension"}, {Check::Injectivity, "injectivity"}, {Check::Orbital, "orbital"}};
    return names;
}

using CheckSet = std::set<Check>;

inline CheckSet all_checks() {
    CheckSet s;
    for (auto& [c, name] : check_names()) s.insert(c);
    return s;
}

inline CheckSet parse_checks(std::string_view text) {
    CheckSet out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        auto word = std::string(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (word == "all") {
            auto all = all_checks();
            out.insert(all.begin(), all.end());
        } else {
            auto it = std::find_if(check_names().begin(), check_names().end(), [&](auto& p) { return p.second == word; });
            if (it == check_names().end()) throw invalid_input("unknown check '" + word + "'");
            out.insert(it->first);
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline nlohmann::ordered_json to_json(const CheckSet& checks) {
    auto arr = nlohmann::ordered_json::array();
    for (auto& [c, name] : check_names())
        if (checks.count(c)) arr.push_back(name);
    return arr;
}

struct RunConfig {
    CheckSet checks = all_checks();
    std::uint64_t seed = 1;
    int threads = 1;
    int symbolic_max_n = 10;
    int hard_cap = kHardCap;
    std::string cache_dir;  // empty: no cache
};

inline std::string cache_dir_from_env() {
    const char* dir = std::getenv("COMPONENT_TABLEAUX_CACHE");
    return dir ? dir : "";
}

// FNV-1a, so per-composition seeds do not depend on the standard library
inline std::uint64_t mix_seed(std::uint64_t seed, const std::string& key) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline nlohmann::ordered_json to_json(Position p) { return nlohmann::ordered_json::array({p.i, p.j}); }

inline nlohmann::ordered_json pair_json(const NeighbouringPair& p) { return to_json(p); }

inline std::filesystem::path cache_file(const std::string& dir, const Diagram& d, const NeighbouringPair& p) {
    std::string name = "I";
    for (int c : d.composition().parts) name += "_" + std::to_string(c);
    name += "__" + std::to_string(p.left) + "_" + std::to_string(p.right) + "_" + std::to_string(p.height) + ".json";
    return std::filesystem::path(dir) / name;
}

inline std::optional<InvariantRecord> read_cached(const std::filesystem::path& file, const Diagram& d, const NeighbouringPair& p) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    try {
        auto j = nlohmann::json::parse(in);
        if (j.at("composition").get<std::vector<int>>() != d.composition().parts) return std::nullopt;
        auto q = j.at("pair");
        if (q.at("left").get<int>() != p.left || q.at("right").get<int>() != p.right || q.at("height").get<int>() != p.height)
            return std::nullopt;
        InvariantRecord rec{p, d_D(d, p), true_degree(d, p), polynomial_from_json(j.at("poly"))};
        if (rec.poly.is_zero()) return std::nullopt;
        return rec;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline void write_cached(const std::filesystem::path& file, const Diagram& d, const InvariantRecord& rec) {
    nlohmann::ordered_json j;
    j["composition"] = d.composition().parts;
    j["pair"] = to_json(rec.pair);
    j["dD"] = rec.d_D;
    j["trueDegree"] = rec.true_degree;
    j["poly"] = to_json(rec.poly);
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    auto tmp = file;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << j.dump() << "\n";
    }
    std::filesystem::rename(tmp, file, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

inline std::vector<InvariantRecord> invariants_for(const Diagram& d, const std::string& cache_dir) {
    std::vector<InvariantRecord> out;
    for (const auto& p : d.pairs()) {
        if (!cache_dir.empty()) {
            auto file = cache_file(cache_dir, d, p);
            if (auto hit = read_cached(file, d, p)) {
                out.push_back(std::move(*hit));
                continue;
            }
            out.push_back(invariant(d, p));
            write_cached(file, d, out.back());
        } else {
            out.push_back(invariant(d, p));
        }
    }
    return out;
}

inline nlohmann::ordered_json excluded_json(const ExcludedRootSet& ex) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& ge : ex.per_generator)
        for (auto [kind, set] : {std::pair{"primary", &ge.primary}, std::pair{"secondary", &ge.secondary}}) {
            if (set->empty()) continue;
            arr.push_back({{"kind", kind},
                           {"generator", {{"i", ge.generator.entry}, {"jList", ge.generator.targets}}},
                           {"positions", to_json(*set)}});
        }
    return arr;
}

inline nlohmann::ordered_json tableau_json(const ComponentTableau& ct, const ExcludedRootSet& ex, int index) {
    auto j = to_json(ct);
    j.erase("composition");
    nlohmann::ordered_json out;
    out["index"] = index;
    for (auto& [k, v] : j.items()) out[k] = v;
    out["excludedRoots"] = to_json(ex.X);
    out["excluded"] = excluded_json(ex);
    return out;
}

struct CompositionResult {
    nlohmann::ordered_json report;
    Status status = Status::Pass;
    int tableaux = 0;
    int invariants = 0;
    std::vector<std::string> failures;
};

namespace detail {

struct Tally {
    Status status = Status::Pass;
    std::vector<std::string> failures;
    void fail(const std::string& what) {
        status = Status::Violation;
        failures.push_back(what);
    }
    void unsure(const std::string& what) {
        if (status == Status::Pass) status = Status::Inconclusive;
        failures.push_back(what);
    }
};

inline std::string pair_name(const NeighbouringPair& p) {
    return "C" + std::to_string(p.left) + "-C" + std::to_string(p.right) + " s=" + std::to_string(p.height);
}

}  // namespace detail

inline CompositionResult verify_composition(const Composition& comp, const RunConfig& cfg) {
    if (comp.n() > cfg.hard_cap) throw invalid_input("n = " + std::to_string(comp.n()) + " exceeds the cap " + std::to_string(cfg.hard_cap));
    auto d = std::make_shared<const Diagram>(comp);
    const auto& checks = cfg.checks;
    const bool symbolic = comp.n() <= cfg.symbolic_max_n;
    const std::uint64_t seed = mix_seed(cfg.seed, comp.str());
    detail::Tally tally;
    CompositionResult res;
    nlohmann::ordered_json rep;
    rep["composition"] = comp.parts;
    rep["engine"] = symbolic ? "symbolic" : "randomized";

    std::unique_ptr<InvariantEngine> engine;
    std::vector<InvariantRecord> invs;
    auto inv_json = nlohmann::ordered_json::array();
    try {
        if (symbolic) {
            invs = invariants_for(*d, cfg.cache_dir);
            for (std::size_t q = 0; q < invs.size(); ++q) {
                const auto& inv = invs[q];
                auto support = chain_support(*d, inv.pair);
                bool degree_ok = true, support_ok = true;
                for (auto& [m, c] : inv.poly.terms()) {
                    degree_ok &= static_cast<int>(m.size()) == inv.true_degree;
                    support_ok &= support.count(m) > 0;
                }
                if (!degree_ok) tally.fail("invariant " + detail::pair_name(inv.pair) + " has a monomial of the wrong degree");
                if (!support_ok) tally.fail("invariant " + detail::pair_name(inv.pair) + " has a monomial outside the chain support");
                inv_json.push_back({{"pair", to_json(inv.pair)},
                                    {"degree", inv.true_degree},
                                    {"dD", inv.d_D},
                                    {"monomials", inv.poly.size()},
                                    {"degreeOk", degree_ok},
                                    {"chainSupportOk", support_ok}});
            }
            engine = std::make_unique<SymbolicEngine>(invs);
        } else {
            for (const auto& p : d->pairs())
                inv_json.push_back({{"pair", to_json(p)}, {"degree", true_degree(*d, p)}, {"dD", d_D(*d, p)}});
            engine = std::make_unique<RandomizedEngine>(d, seed);
        }
        for (const auto& p : d->pairs())
            if (true_degree(*d, p) + d_D(*d, p) + p.height != boxes_between(*d, p))
                tally.fail("degree identity fails for " + detail::pair_name(p));
        rep["invariants"] = inv_json;
        res.invariants = d->generator_count();

        auto cts = component_tableaux(d);
        res.tableaux = static_cast<int>(cts.size());
        if (d->generator_count() > 0 && cts.empty()) tally.fail("no component tableau");
        if (!distinct_numerical_data(cts)) tally.fail("two choice sequences give the same tableau");

        auto tabs = nlohmann::ordered_json::array();
        std::vector<ExcludedRootSet> exs;
        for (std::size_t idx = 0; idx < cts.size(); ++idx) {
            const auto& ct = cts[idx];
            const std::string tag = "tableau " + std::to_string(idx) + ": ";
            auto ex = excluded_roots(ct);
            auto t = tableau_json(ct, ex, static_cast<int>(idx));

            auto sr = string_checks(ct.ext);
            bool levi = !levi_lowering_escape(*d, ex.u).has_value();
            bool closed = u_bracket_closed(*d, ex.u);
            t["structure"] = {{"nonCrossing", sr.non_crossing},
                              {"startingPlaces", sr.starting_places},
                              {"oneEndsDistinct", sr.one_ends_distinct},
                              {"leviStable", levi},
                              {"bracketClosed", closed}};
            if (!sr.ok()) tally.fail(tag + sr.detail);
            if (!levi) tally.fail(tag + "u is not stable under the Levi lowering operators");
            if (!closed) tally.fail(tag + "u is not bracket closed");

            std::vector<PenetrationRecord> recs;
            auto degree = nlohmann::ordered_json::array();
            for (int q = 0; q < d->generator_count(); ++q) {
                const auto& p = d->pairs()[q];
                auto rec = penetrating_string(ct, q);
                auto hat = hatted_tableau(ct, rec);
                bool virtual_ok = hat.virtual_all == hat.true_deg - 1;
                bool hat_sets = hat.primary == rec.E_primary && hat.secondary == rec.E_secondary;
                nlohmann::ordered_json dj{{"pair", to_json(p)},
                                          {"trueDegree", hat.true_deg},
                                          {"virtualDegree", hat.virtual_all},
                                          {"virtualDegreeInside", hat.virtual_inside},
                                          {"virtualOk", virtual_ok},
                                          {"heightLedger", hat.ledger_ok},
                                          {"penetrates", rec.starts_inside && rec.penetrates_last},
                                          {"hattedExclusions", hat_sets}};
                if (!virtual_ok) tally.fail(tag + "virtual degree " + std::to_string(hat.virtual_all) + " for " + detail::pair_name(p));
                if (!hat.ledger_ok) tally.fail(tag + "height ledger: " + hat.ledger_detail);
                if (!rec.starts_inside || !rec.penetrates_last) tally.fail(tag + "string does not penetrate " + detail::pair_name(p));
                if (!hat_sets) tally.fail(tag + "hatted tableau exclusions differ from the string's for " + detail::pair_name(p));
                if (symbolic) {
                    auto exc = exceptional_constituents(*d, p, rec.E, hat.shifted.columns);
                    dj["exceptionalMonomials"] = exc.monomials;
                    dj["exceptionalOk"] = exc.strong_fail == 0;
                    if (exc.strong_fail) tally.fail(tag + "exceptional constituent outside E for " + detail::pair_name(p));
                }
                degree.push_back(dj);
                recs.push_back(std::move(rec));
            }
            t["degree"] = degree;

            if (checks.count(Check::Vanishing)) {
                auto arr = nlohmann::ordered_json::array();
                bool all = true;
                for (int q = 0; q < d->generator_count(); ++q) {
                    const auto& p = d->pairs()[q];
                    nlohmann::ordered_json vj{{"pair", to_json(p)}};
                    if (symbolic) {
                        auto vr = vanishing_result(*d, invs[q], q, ex.X, recs[q].E);
                        vj["global"] = vr.global;
                        vj["specific"] = vr.specific;
                        vj["structural"] = vr.structural;
                        if (vr.witness) {
                            auto w = nlohmann::ordered_json::array();
                            for (Var v : *vr.witness) w.push_back(to_json(position_of(v)));
                            vj["witness"] = w;
                        }
                        all &= vr.global && vr.specific;
                        if (!vr.global) tally.fail(tag + "invariant " + detail::pair_name(p) + " survives zeroing X");
                        if (!vr.specific) tally.fail(tag + "invariant " + detail::pair_name(p) + " survives zeroing E");
                    } else {
                        bool g = engine->vanishes(q, ex.X), s = engine->vanishes(q, recs[q].E);
                        vj["global"] = g;
                        vj["specific"] = s;
                        all &= g && s;
                        if (!g) tally.fail(tag + "invariant " + detail::pair_name(p) + " survives zeroing X");
                        if (!s) tally.fail(tag + "invariant " + detail::pair_name(p) + " survives zeroing E");
                    }
                    arr.push_back(vj);
                }
                t["vanishing"] = {{"status", all ? "pass" : "violation"}, {"pairs", arr}};
            }

            if (checks.count(Check::Weierstrass)) {
                auto arr = nlohmann::ordered_json::array();
                std::set<Position> seen;
                bool ok = static_cast<int>(ct.v_support.size()) == d->generator_count();
                if (!ok) tally.fail(tag + "number of star lines differs from the number of pairs");
                for (int q = 0; q < d->generator_count(); ++q) {
                    auto v = engine->star(ct, q);
                    if (!v) {
                        ok = false;
                        tally.fail(tag + "restriction of " + detail::pair_name(d->pairs()[q]) + " is not a single star variable");
                        arr.push_back(nullptr);
                    } else {
                        if (!seen.insert(*v).second) {
                            ok = false;
                            tally.fail(tag + "star variable " + str(*v) + " repeats");
                        }
                        arr.push_back(to_json(*v));
                    }
                }
                t["weierstrass"] = {{"status", ok ? "pass" : "violation"}, {"variables", arr}};
            }

            if (checks.count(Check::Covering)) {
                auto cov = covering_check(ct, ex);
                auto list = [](const std::vector<Position>& v) {
                    auto a = nlohmann::ordered_json::array();
                    for (auto p : v) a.push_back(to_json(p));
                    return a;
                };
                t["covering"] = {{"status", cov.ok ? "pass" : "violation"},
                                 {"uncovered", list(cov.uncovered)},
                                 {"ambiguous", list(cov.ambiguous)},
                                 {"strayStar", list(cov.stray_star)},
                                 {"encircledOne", list(cov.encircled_one)}};
                if (!cov.ok) tally.fail(tag + "covering or label sanity fails");
            }

            if (checks.count(Check::Dimension)) {
                auto dim = tangent_dimension(ct, ex);
                t["dimension"] = {{"status", dim.ok() ? "pass" : "violation"},
                                  {"dimM", dim.dim_m},
                                  {"g", dim.g},
                                  {"dimU", dim.dim_u},
                                  {"rankUPlusNe", dim.rank_u_ne},
                                  {"rankNe", dim.rank_ne},
                                  {"rankNePlusY", dim.rank_ne_y},
                                  {"rankTotal", dim.rank_total},
                                  {"dimOk", dim.dim_ok},
                                  {"neMeetsYTrivially", dim.ne_y_trivial},
                                  {"directSum", dim.direct_sum_ok}};
                if (!dim.ok()) tally.fail(tag + "tangent dimension check fails");
            }

            if (checks.count(Check::Orbital)) {
                auto orb = orbital_variety_test(ct, ex, mix_seed(seed, std::to_string(idx)));
                t["orbital"] = {{"status", status_name(orb.status())},
                                {"orbital", orb.orbital},
                                {"genericOrbitDim", orb.generic_dim},
                                {"componentOrbitDim", 2 * (d->dim_m() - d->generator_count())},
                                {"sampleDims", orb.sample_dims},
                                {"genericJordanType", orb.generic_jordan},
                                {"excludedBracketClosed", orb.x_bracket_closed},
                                {"method", "random samples of u"}};
                if (orb.status() == Status::Inconclusive) tally.unsure(tag + "generic orbit dimension unstable over samples");
            }

            auto jt = jordan_type(e_matrix(ct));
            t["jordanType"] = jt;
            t["orbitDimE"] = orbit_dimension(jt);
            tabs.push_back(t);
            exs.push_back(std::move(ex));
        }
        rep["tableaux"] = tabs;

        if (checks.count(Check::Injectivity)) {
            auto arr = nlohmann::ordered_json::array();
            for (std::size_t a = 0; a < cts.size(); ++a)
                for (std::size_t b = a + 1; b < cts.size(); ++b) {
                    auto w = injectivity_witness(cts[a], static_cast<int>(a), cts[b], static_cast<int>(b), *engine);
                    nlohmann::ordered_json wj{{"tableau", w.tableau},
                                              {"tableauPrime", w.tableau_prime},
                                              {"pair", w.pair >= 0 ? to_json(d->pairs()[w.pair]) : nlohmann::ordered_json(nullptr)},
                                              {"entry", w.entry},
                                              {"entryPrime", w.entry_prime},
                                              {"line", to_json(w.line)},
                                              {"linePrime", to_json(w.line_prime)},
                                              {"rolesFollowEntries", w.roles_follow_entries},
                                              {"exchange", w.exchange_ok},
                                              {"quadrantClear", w.quadrant_clear},
                                              {"specificVanishing", w.specific_vanishing},
                                              {"nonvanishing", w.nonvanishing}};
                    if (!w.detail.empty()) wj["detail"] = w.detail;
                    arr.push_back({{"i", a}, {"j", b}, {"status", w.ok() ? "pass" : "violation"}, {"witness", wj}});
                    if (!w.ok()) tally.fail("tableaux " + std::to_string(a) + "," + std::to_string(b) + ": " + w.detail);
                }
            rep["injectivityPairs"] = arr;
        }

        if (symbolic && comp.is_partition()) {
            bool disjoint = disjoint_variables(invs);
            rep["disjointVariables"] = disjoint;
            if (!disjoint) tally.fail("invariants of a partition share a variable");
        }
    } catch (const construction_violation& e) {
        tally.fail(std::string("construction violation: ") + e.what());
    } catch (const internal_consistency& e) {
        tally.fail(std::string("internal consistency: ") + e.what());
    }
    rep["status"] = status_name(tally.status);
    if (!tally.failures.empty()) rep["failures"] = tally.failures;
    res.report = std::move(rep);
    res.status = tally.status;
    res.failures = std::move(tally.failures);
    return res;
}

inline Status combine(Status a, Status b) {
    if (a == Status::Violation || b == Status::Violation) return Status::Violation;
    if (a == Status::Inconclusive || b == Status::Inconclusive) return Status::Inconclusive;
    return Status::Pass;
}

inline int exit_code(Status s) {
    switch (s) {
        case Status::Pass: return 0;
        case Status::Violation: return 2;
        default: return 3;
    }
}

inline nlohmann::ordered_json report_header(const std::string& command, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["schemaVersion"] = kSchemaVersion;
    j["command"] = command;
    j["seed"] = cfg.seed;
    j["checks"] = to_json(cfg.checks);
    j["symbolicMaxN"] = cfg.symbolic_max_n;
    return j;
}

inline nlohmann::ordered_json verify_report(const Composition& comp, const RunConfig& cfg, Status& status) {
    auto res = verify_composition(comp, cfg);
    auto j = report_header("verify", cfg);
    j["engine"] = res.report["engine"];
    for (auto& [k, v] : res.report.items())
        if (k != "engine") j[k] = v;
    status = res.status;
    return j;
}

// results come back in composition order whatever the thread count
inline std::vector<CompositionResult> run_parallel(const std::vector<Composition>& comps, const RunConfig& cfg) {
    std::vector<CompositionResult> out(comps.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < comps.size(); i = next++) out[i] = verify_composition(comps[i], cfg);
    };
    int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(comps.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

inline nlohmann::ordered_json sweep_report(int n, const std::vector<Composition>& comps, const std::vector<CompositionResult>& results,
                                           const RunConfig& cfg, Status& status) {
    auto j = report_header("sweep", cfg);
    j["n"] = n;
    j["engine"] = n <= cfg.symbolic_max_n ? "symbolic" : "randomized";
    auto arr = nlohmann::ordered_json::array();
    int tableaux = 0, violations = 0, inconclusive = 0;
    status = Status::Pass;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto& r = results[i];
        nlohmann::ordered_json c{{"composition", comps[i].parts},
                                 {"tableaux", r.tableaux},
                                 {"invariants", r.invariants},
                                 {"status", status_name(r.status)}};
        if (!r.failures.empty()) c["failures"] = r.failures;
        arr.push_back(c);
        tableaux += r.tableaux;
        violations += r.status == Status::Violation;
        inconclusive += r.status == Status::Inconclusive;
        status = combine(status, r.status);
    }
    j["compositions"] = arr;
    j["summary"] = {{"compositions", comps.size()}, {"tableaux", tableaux}, {"violations", violations}, {"inconclusive", inconclusive}};
    j["status"] = status_name(status);
    return j;
}

inline nlohmann::ordered_json enumerate_report(const Composition& comp) {
    auto d = std::make_shared<const Diagram>(comp);
    nlohmann::ordered_json j;
    j["schemaVersion"] = kSchemaVersion;
    j["command"] = "enumerate";
    j["diagram"] = to_json(*d);
    auto pairs = nlohmann::ordered_json::array();
    for (auto& p : d->pairs()) pairs.push_back(to_json(p));
    j["pairs"] = pairs;
    auto tabs = nlohmann::ordered_json::array();
    int idx = 0;
    for (auto& ct : component_tableaux(d)) tabs.push_back(tableau_json(ct, excluded_roots(ct), idx++));
    j["tableaux"] = tabs;
    return j;
}

inline std::string enumerate_text(const Composition& comp) {
    auto d = std::make_shared<const Diagram>(comp);
    auto cts = component_tableaux(d);
    std::ostringstream os;
    os << "composition (" << comp.str() << "): " << cts.size() << " component tableau" << (cts.size() == 1 ? "" : "x") << ", "
       << d->generator_count() << " pair" << (d->generator_count() == 1 ? "" : "s") << "\n";
    for (std::size_t i = 0; i < cts.size(); ++i) os << "\n" << render_text(cts[i], excluded_roots(cts[i]), static_cast<int>(i));
    return os.str();
}

inline std::string enumerate_latex(const Composition& comp) {
    auto d = std::make_shared<const Diagram>(comp);
    std::ostringstream os;
    os << latex_preamble();
    int i = 0;
    for (auto& ct : component_tableaux(d)) os << render_latex(ct, excluded_roots(ct), i++);
    return os.str();
}

}  // namespace ctab
