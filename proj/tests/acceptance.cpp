// one PASS/FAIL line per acceptance criterion; exit status 1 if any line fails

#include <atomic>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <ctab/analysis.hpp>

using namespace ctab;

namespace {

struct Line {
    bool ok = true;
    std::vector<std::string> notes;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
};

int failures = 0;

void report(int k, const std::string& title, const Line& line) {
    std::cout << (line.ok ? "PASS" : "FAIL") << " " << k << " " << title << "\n";
    for (std::size_t i = 0; i < line.notes.size() && i < 12; ++i) std::cout << "     " << line.notes[i] << "\n";
    if (line.notes.size() > 12) std::cout << "     ... " << line.notes.size() - 12 << " more\n";
    failures += !line.ok;
}

std::string pos_list(const PositionSet& s) {
    std::string out = "{";
    for (auto p : s) out += (out.size() > 1 ? " " : "") + std::to_string(p.i) + "," + std::to_string(p.j);
    return out + "}";
}

std::vector<InvariantRecord> all_invariants(const Diagram& d) {
    std::vector<InvariantRecord> out;
    for (auto& p : d.pairs()) out.push_back(invariant(d, p));
    return out;
}

std::vector<std::pair<int, int>> steps(const ComponentTableau& ct) {
    std::vector<std::pair<int, int>> s;
    for (auto& l : ct.ext.lowerings) s.push_back({l.entry, l.rows_down});
    return s;
}

// run f on every composition of every n in [lo,hi], in parallel; f returns problems found
template <class F>
std::vector<std::string> sweep(const std::vector<Composition>& comps, F f) {
    std::vector<std::vector<std::string>> out(comps.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < comps.size(); i = next++) {
            try {
                out[i] = f(comps[i]);
            } catch (const std::exception& e) {
                out[i].push_back(comps[i].str() + ": " + e.what());
            }
        }
    };
    int threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::vector<std::string> all;
    for (auto& v : out) all.insert(all.end(), v.begin(), v.end());
    return all;
}

std::vector<Composition> compositions_up_to(int hi, int lo = 1) {
    std::vector<Composition> out;
    for (int n = lo; n <= hi; ++n)
        for (auto& c : compositions_of(n)) out.push_back(c);
    return out;
}

void absorb(Line& line, const std::vector<std::string>& problems) {
    for (auto& p : problems) line.expect(false, p);
}

// ---- per-composition checks ----

std::vector<std::string> vanishing_symbolic(const Composition& c) {
    std::vector<std::string> bad;
    auto d = std::make_shared<const Diagram>(c);
    auto invs = all_invariants(*d);
    for (auto& ct : component_tableaux(d)) {
        auto ex = excluded_roots(ct);
        for (int q = 0; q < d->generator_count(); ++q) {
            auto rec = penetrating_string(ct, q);
            auto vr = vanishing_result(*d, invs[q], q, ex.X, rec.E);
            if (!vr.global || !vr.specific) bad.push_back(c.str() + " pair " + std::to_string(q));
        }
    }
    return bad;
}

std::vector<std::string> vanishing_random(const Composition& c) {
    std::vector<std::string> bad;
    auto d = std::make_shared<const Diagram>(c);
    RandomizedEngine eng(d, 1000 + c.n(), 8);
    for (auto& ct : component_tableaux(d)) {
        auto ex = excluded_roots(ct);
        for (int q = 0; q < d->generator_count(); ++q)
            if (!eng.vanishes(q, ex.X) || !eng.vanishes(q, penetrating_string(ct, q).E))
                bad.push_back(c.str() + " pair " + std::to_string(q) + " (randomized)");
    }
    return bad;
}

std::vector<std::string> weierstrass(const Composition& c) {
    std::vector<std::string> bad;
    auto d = std::make_shared<const Diagram>(c);
    SymbolicEngine eng(all_invariants(*d));
    for (auto& ct : component_tableaux(d)) {
        if (static_cast<int>(ct.v_support.size()) != d->generator_count()) bad.push_back(c.str() + " |v| != g");
        std::set<Position> seen;
        for (int q = 0; q < d->generator_count(); ++q) {
            auto s = eng.star(ct, q);
            if (!s || !seen.insert(*s).second) bad.push_back(c.str() + " pair " + std::to_string(q));
        }
    }
    return bad;
}

std::vector<std::string> dimension(const Composition& c) {
    std::vector<std::string> bad;
    auto d = std::make_shared<const Diagram>(c);
    for (auto& ct : component_tableaux(d))
        if (!tangent_dimension(ct, excluded_roots(ct)).ok()) bad.push_back(c.str());
    return bad;
}

std::vector<std::string> covering(const Composition& c) {
    std::vector<std::string> bad;
    auto d = std::make_shared<const Diagram>(c);
    for (auto& ct : component_tableaux(d))
        if (!covering_check(ct, excluded_roots(ct)).ok) bad.push_back(c.str());
    return bad;
}

std::vector<std::string> injectivity(const Composition& c) {
    std::vector<std::string> bad;
    auto d = std::make_shared<const Diagram>(c);
    auto cts = component_tableaux(d);
    SymbolicEngine eng(all_invariants(*d));
    for (std::size_t a = 0; a < cts.size(); ++a)
        for (std::size_t b = a + 1; b < cts.size(); ++b) {
            auto w = injectivity_witness(cts[a], static_cast<int>(a), cts[b], static_cast<int>(b), eng);
            if (!w.ok()) bad.push_back(c.str() + " " + std::to_string(a) + "," + std::to_string(b) + ": " + w.detail);
        }
    return bad;
}

std::vector<std::string> degrees(const Composition& c) {
    std::vector<std::string> bad;
    auto d = std::make_shared<const Diagram>(c);
    for (auto& p : d->pairs()) {
        auto inv = invariant(*d, p);
        for (auto& [m, coef] : inv.poly.terms())
            if (static_cast<int>(m.size()) != boxes_between(*d, p) - d_D(*d, p) - p.height) bad.push_back(c.str() + " degree");
    }
    for (auto& ct : component_tableaux(d))
        for (int q = 0; q < d->generator_count(); ++q) {
            auto hat = hatted_tableau(ct, penetrating_string(ct, q));
            if (hat.virtual_all != hat.true_deg - 1) bad.push_back(c.str() + " virtual degree");
            if (!hat.ledger_ok) bad.push_back(c.str() + " ledger: " + hat.ledger_detail);
        }
    return bad;
}

// ---- the frozen figure ----

struct FigureMatrix {
    std::vector<std::pair<int, int>> lowered;
    PositionSet one, star, circle;
};

std::vector<FigureMatrix> read_figure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<FigureMatrix> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string key;
        is >> key;
        if (key == "matrix") {
            out.emplace_back();
            continue;
        }
        std::string tok;
        while (is >> tok) {
            auto sep = tok.find_first_of(":,");
            int a = std::stoi(tok.substr(0, sep)), b = std::stoi(tok.substr(sep + 1));
            auto& m = out.back();
            if (key == "lowered") m.lowered.push_back({a, b});
            else if (key == "one") m.one.insert({a, b});
            else if (key == "star") m.star.insert({a, b});
            else if (key == "circle") m.circle.insert({a, b});
        }
    }
    return out;
}

Line figure_matrices() {
    Line line;
    auto fig = read_figure(std::string(CTAB_SOURCE_DIR) + "/tests/golden/labelled_matrices.txt");
    Diagram d(std::vector<int>{2, 1, 2, 1, 2, 1});
    auto cts = component_tableaux(d);
    line.expect(fig.size() == cts.size(), "figure has " + std::to_string(fig.size()) + " matrices, engine " + std::to_string(cts.size()));
    for (std::size_t k = 0; k < fig.size(); ++k) {
        const ComponentTableau* ct = nullptr;
        for (auto& c : cts)
            if (steps(c) == fig[k].lowered) ct = &c;
        std::string tag = "matrix " + std::to_string(k + 1) + ": ";
        if (!ct) {
            line.expect(false, tag + "no tableau with its lowerings");
            continue;
        }
        auto ex = excluded_roots(*ct);
        PositionSet circle;
        for (auto p : ex.X)
            if (!ct->v_support.count(p)) circle.insert(p);
        line.expect(ct->e_support == fig[k].one, tag + "1 labels " + pos_list(ct->e_support) + " vs figure " + pos_list(fig[k].one));
        line.expect(ct->v_support == fig[k].star, tag + "stars " + pos_list(ct->v_support) + " vs figure " + pos_list(fig[k].star));
        line.expect(circle == fig[k].circle, tag + "circles " + pos_list(circle) + " vs figure " + pos_list(fig[k].circle));
    }
    return line;
}

}  // namespace

int main() {
    {
        Line line;
        Diagram d(std::vector<int>{1, 2, 1});
        auto minor = symbolic_minor(d, d.pairs()[0]);
        auto inv = extract_invariant(minor, d, d.pairs()[0]);
        line.expect(inv.poly.str() == "x1_2*x2_4 + x1_3*x3_4", "invariant " + inv.poly.str());
        auto top = minor.coefficient(kParamA, 2);
        auto x14 = Polynomial::variable(var_of(1, 4));
        line.expect(top == x14 || top == -x14, "a^2 coefficient " + top.str());
        report(1, "invariant of (1,2,1) and the a^2 coefficient of its minor", line);
    }
    {
        Line line;
        std::vector<std::pair<std::vector<int>, std::size_t>> want{
            {{1, 2, 1, 2}, 2}, {{2, 1, 1, 2, 1}, 3}, {{2, 1, 1, 1, 2}, 3}, {{2, 1, 2, 1, 2, 1}, 5}, {{3, 2, 1, 1, 1, 2, 3}, 6}, {{2, 1, 1, 2}, 2}};
        for (auto& [c, k] : want) {
            auto got = component_tableaux(Diagram(c)).size();
            line.expect(got == k, Composition{c}.str() + ": " + std::to_string(got) + " tableaux, want " + std::to_string(k));
        }
        report(2, "tableau counts", line);
    }
    {
        Line line;
        Diagram d(std::vector<int>{2, 1, 1, 2});
        for (auto& ct : component_tableaux(d))
            if (steps(ct) == std::vector<std::pair<int, int>>{{3, 1}, {3, 1}}) {
                auto X = excluded_roots(ct).X;
                line.expect(X == PositionSet{{3, 4}, {3, 6}, {4, 6}}, "(2,1,1,2) X = " + pos_list(X));
            }
        Diagram f(std::vector<int>{1, 2, 2, 1, 3, 2});
        auto ge = generator_exclusions(f, Generator{8, {11}, 0});
        line.expect(ge.secondary == PositionSet{{4, 9}, {5, 9}, {6, 9}}, "secondary " + pos_list(ge.secondary));
        line.expect(ge.primary == PositionSet{{7, 11}, {8, 11}}, "primary " + pos_list(ge.primary));
        auto fig = figure_matrices();
        for (auto& n : fig.notes) line.expect(false, n);
        report(3, "excluded roots, including the five labelled matrices of (2,1,2,1,2,1)", line);
    }
    {
        Line line;
        Diagram d(std::vector<int>{2, 1, 1, 1, 2});
        int dim_n = d.n() * (d.n() - 1) / 2;
        for (auto& ct : component_tableaux(d)) {
            auto jt = jordan_type(e_matrix(ct));
            int last = ct.ext.lowerings.back().entry;
            if (last == 4) {
                line.expect(jt == std::vector<int>{4, 2, 1}, "e4 type");
                line.expect(orbit_dimension(jt) == 2 * (dim_n - 4), "e4 orbit dimension");
            }
            if (last == 3) {
                line.expect(jt == std::vector<int>{3, 2, 2}, "e3 type");
                line.expect(orbit_dimension(jt) == 2 * (dim_n - 6), "e3 orbit dimension");
            }
        }
        report(4, "Jordan types of e for (2,1,1,1,2)", line);
    }

    auto upto9 = compositions_up_to(9);
    auto upto8 = compositions_up_to(8);
    {
        Line line;
        absorb(line, sweep(upto9, vanishing_symbolic));
        // a fixed sample for n = 10, 11
        std::mt19937 rng(20);
        for (int n : {10, 11}) {
            auto all = compositions_of(n);
            std::shuffle(all.begin(), all.end(), rng);
            all.resize(40);
            absorb(line, sweep(all, vanishing_random));
        }
        report(5, "vanishing after zeroing X and after zeroing E, n <= 9, sampled n = 10, 11", line);
    }
    {
        Line line;
        absorb(line, sweep(upto9, weierstrass));
        report(6, "restrictions are distinct single star variables, n <= 9", line);
    }
    {
        Line line;
        absorb(line, sweep(upto9, dimension));
        report(7, "tangent dimension and direct sum, n <= 9", line);
    }
    {
        Line line;
        absorb(line, sweep(upto9, covering));
        report(8, "covering and label sanity, n <= 9", line);
    }
    {
        Line line;
        absorb(line, sweep(upto8, injectivity));
        report(9, "injectivity witnesses for every pair of tableaux, n <= 8", line);
    }
    {
        Line line;
        absorb(line, sweep(upto9, degrees));
        report(10, "degree ledger, n <= 9", line);
    }
    {
        Line line;
        std::vector<Composition> parts;
        for (auto& c : upto8)
            if (c.is_partition()) parts.push_back(c);
        absorb(line, sweep(parts, [](const Composition& c) {
                   std::vector<std::string> bad;
                   if (!disjoint_variables(all_invariants(Diagram(c)))) bad.push_back(c.str());
                   return bad;
               }));
        report(11, "invariants of a partition use disjoint variables, n <= 8", line);
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << "\n";
    return failures ? 1 : 0;
}
