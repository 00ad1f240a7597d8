#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <ctab/report.hpp>

using namespace ctab;

namespace {

struct Options {
    std::string composition;
    int n = 0;
    std::string checks = "all";
    std::string format = "text";
    std::string out;
    std::uint64_t seed = 1;
    int threads = 1;
    int symbolic_max_n = 10;
};

// 1 on IO failure
int emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(path);
    if (!f) {
        std::cerr << "cannot write " << path << "\n";
        return 1;
    }
    f << text;
    return f ? 0 : 1;
}

RunConfig config_from(const Options& o) {
    RunConfig cfg;
    cfg.checks = parse_checks(o.checks);
    cfg.seed = o.seed;
    cfg.threads = std::max(1, o.threads);
    cfg.symbolic_max_n = o.symbolic_max_n;
    cfg.cache_dir = cache_dir_from_env();
    return cfg;
}

// enumeration alone is cheap, so only verification is capped
Composition composition_from(const Options& o, bool capped) {
    auto c = Composition::parse(o.composition);
    if (capped && c.n() > kHardCap) throw invalid_input("n = " + std::to_string(c.n()) + " exceeds the cap " + std::to_string(kHardCap));
    return c;
}

int cmd_enumerate(const Options& o) {
    auto comp = composition_from(o, false);
    if (o.format == "json") return emit(enumerate_report(comp).dump(2) + "\n", o.out);
    if (o.format == "latex") return emit(enumerate_latex(comp), o.out);
    return emit(enumerate_text(comp), o.out);
}

std::string verify_text(const nlohmann::ordered_json& r) {
    std::ostringstream os;
    os << "verify (";
    for (std::size_t i = 0; i < r["composition"].size(); ++i) os << (i ? "," : "") << r["composition"][i].get<int>();
    os << ") engine " << r["engine"].get<std::string>() << "\n";
    for (auto& t : r["tableaux"]) {
        os << "  tableau " << t["index"].get<int>() << ":";
        for (auto& [c, name] : check_names())
            if (t.contains(name)) os << " " << name << "=" << t[name]["status"].get<std::string>();
        os << " jordan=(";
        for (std::size_t i = 0; i < t["jordanType"].size(); ++i) os << (i ? "," : "") << t["jordanType"][i].get<int>();
        os << ")";
        if (t.contains("orbital")) os << (t["orbital"]["orbital"].get<bool>() ? " orbital-closure" : " not-orbital-closure");
        os << "\n";
    }
    if (r.contains("injectivityPairs")) {
        int ok = 0;
        for (auto& w : r["injectivityPairs"]) ok += w["status"] == "pass";
        os << "  injectivity " << ok << "/" << r["injectivityPairs"].size() << " pairs separated\n";
    }
    if (r.contains("failures"))
        for (auto& f : r["failures"]) os << "  FAIL " << f.get<std::string>() << "\n";
    os << "status " << r["status"].get<std::string>() << "\n";
    return os.str();
}

int cmd_verify(const Options& o) {
    auto comp = composition_from(o, true);
    auto cfg = config_from(o);
    Status status;
    auto report = verify_report(comp, cfg, status);
    std::string text = o.format == "json" ? report.dump(2) + "\n" : verify_text(report);
    if (int rc = emit(text, o.out)) return rc;
    return exit_code(status);
}

int cmd_sweep(const Options& o) {
    if (o.n < 1 || o.n > kHardCap) throw invalid_input("--n must lie in 1.." + std::to_string(kHardCap));
    auto cfg = config_from(o);
    Status overall = Status::Pass;
    if (!o.out.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(o.out, ec);
        if (ec) {
            std::cerr << "cannot create " << o.out << "\n";
            return 1;
        }
    }
    for (int n = 1; n <= o.n; ++n) {
        auto start = std::chrono::steady_clock::now();
        auto comps = compositions_of(n);
        auto results = run_parallel(comps, cfg);
        Status status;
        auto report = sweep_report(n, comps, results, cfg, status);
        overall = combine(overall, status);
        auto& s = report["summary"];
        std::cout << "n=" << n << " compositions=" << s["compositions"] << " tableaux=" << s["tableaux"]
                  << " violations=" << s["violations"] << " inconclusive=" << s["inconclusive"] << "\n";
        if (o.format == "text")
            for (std::size_t i = 0; i < comps.size(); ++i)
                std::cout << "  (" << comps[i].str() << ") tableaux " << results[i].tableaux << " invariants " << results[i].invariants
                          << " " << status_name(results[i].status) << "\n";
        for (std::size_t i = 0; i < comps.size(); ++i)
            for (auto& f : results[i].failures) std::cout << "  FAIL (" << comps[i].str() << ") " << f << "\n";
        if (!o.out.empty()) {
            auto path = (std::filesystem::path(o.out) / ("sweep_n" + std::to_string(n) + ".json")).string();
            if (emit(report.dump(2) + "\n", path)) return 1;
        }
        std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        std::cerr << "n=" << n << " took " << took.count() << " s\n";
    }
    std::cout << "status " << status_name(overall) << "\n";
    return exit_code(overall);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"component tableaux of the nilfibre of a parabolic nilradical"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--checks", o.checks, "all or a comma list of vanishing,weierstrass,covering,dimension,injectivity,orbital");
        sub->add_option("--format", o.format)->check(CLI::IsMember({"text", "json", "latex"}));
        sub->add_option("--out", o.out, "output file (directory for sweep)");
        sub->add_option("--seed", o.seed);
        sub->add_option("--threads", o.threads);
        sub->add_option("--symbolic-max-n", o.symbolic_max_n, "largest n expanded symbolically");
    };
    auto* en = app.add_subcommand("enumerate", "list the component tableaux of a composition");
    en->add_option("--composition", o.composition, "e.g. 2,1,1,2")->required();
    common(en);
    auto* ve = app.add_subcommand("verify", "run the selected checks on one composition");
    ve->add_option("--composition", o.composition)->required();
    common(ve);
    auto* sw = app.add_subcommand("sweep", "run the checks on every composition of every n up to --n");
    sw->add_option("--n", o.n)->required();
    common(sw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    try {
        if (*en) return cmd_enumerate(o);
        if (*ve) return cmd_verify(o);
        return cmd_sweep(o);
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
