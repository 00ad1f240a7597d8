#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace ctab;
using oracle::positions;

namespace {

std::vector<InvariantRecord> all_invariants(const Diagram& d) {
    std::vector<InvariantRecord> out;
    for (auto& p : d.pairs()) out.push_back(invariant(d, p));
    return out;
}

std::vector<std::vector<int>> partitions_of(int n, int largest) {
    if (n == 0) return {{}};
    std::vector<std::vector<int>> out;
    for (int first = std::min(n, largest); first >= 1; --first)
        for (auto rest : partitions_of(n - first, first)) {
            rest.insert(rest.begin(), first);
            out.push_back(rest);
        }
    return out;
}

std::vector<std::pair<int, int>> steps(const ComponentTableau& ct) {
    std::vector<std::pair<int, int>> s;
    for (auto& l : ct.ext.lowerings) s.push_back({l.entry, l.rows_down});
    return s;
}

// dim of u + [n,e], with the bracket taken as actual matrix products
int tangent_rank_by_products(const ComponentTableau& ct, const ExcludedRootSet& ex) {
    const Diagram& d = ct.diag();
    int n = d.n();
    auto mpos = d.m_positions();
    IntMatrix e = e_matrix(ct);
    IntMatrix rows;
    for (auto p : ex.u) {
        std::vector<mpz_class> r;
        for (auto q : mpos) r.push_back(q == p ? 1 : 0);
        rows.push_back(r);
    }
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            IntMatrix x(n, std::vector<mpz_class>(n, 0));
            x[i - 1][j - 1] = 1;
            auto xe = multiply(x, e), ex2 = multiply(e, x);
            std::vector<mpz_class> r;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    mpz_class v = xe[a][b] - ex2[a][b];
                    if (v != 0) REQUIRE(d.in_m(a + 1, b + 1));
                }
            for (auto q : mpos) r.push_back(xe[q.i - 1][q.j - 1] - ex2[q.i - 1][q.j - 1]);
            rows.push_back(r);
        }
    return oracle::rational_rank(rows);
}

}  // namespace

TEST_CASE("jordan type from ranks of powers") {
    for (int n = 1; n <= 7; ++n)
        for (auto& blocks : partitions_of(n, n)) {
            auto m = oracle::jordan_matrix(blocks);
            CHECK(jordan_type(m) == blocks);
            if (n <= 6) CHECK(orbit_dimension(blocks) == oracle::orbit_dim(m));
        }
    IntMatrix zero(4, std::vector<mpz_class>(4, 0));
    CHECK(jordan_type(zero) == std::vector<int>{1, 1, 1, 1});
    CHECK(orbit_dimension({1, 1, 1, 1}) == 0);
    IntMatrix id(2, std::vector<mpz_class>(2, 0));
    id[0][0] = id[1][1] = 1;
    CHECK_THROWS_AS(jordan_type(id), invalid_input);
    CHECK(conjugate({4, 2, 1}) == std::vector<int>{3, 2, 1, 1});
    CHECK(conjugate({3, 2, 2}) == std::vector<int>{3, 3, 1});
    CHECK(conjugate({}).empty());
}

TEST_CASE("jordan types of the (2,1,1,1,2) tableaux") {
    Diagram d(std::vector<int>{2, 1, 1, 1, 2});
    auto cts = component_tableaux(d);
    std::map<int, std::vector<int>> by_choice;
    for (auto& ct : cts) {
        auto m = e_matrix(ct);
        auto jt = jordan_type(m);
        by_choice[ct.ext.lowerings.back().entry] = jt;
        CHECK(orbit_dimension(jt) == oracle::orbit_dim(m));
    }
    CHECK(by_choice[4] == std::vector<int>{4, 2, 1});
    CHECK(by_choice[3] == std::vector<int>{3, 2, 2});
    CHECK(orbit_dimension(by_choice[4]) == 34);
    CHECK(orbit_dimension(by_choice[3]) == 30);
}

TEST_CASE("tangent space dimension") {
    Diagram d(std::vector<int>{2, 1, 1, 2});
    for (auto& ct : component_tableaux(d)) {
        auto ex = excluded_roots(ct);
        auto rep = tangent_dimension(ct, ex);
        CHECK(rep.dim_m == 13);
        CHECK(rep.rank_u_ne == 11);
        CHECK(tangent_rank_by_products(ct, ex) == 11);
        CHECK(rep.ok());
    }
    Diagram m(std::vector<int>{2, 1, 1, 1, 2});
    for (auto& ct : component_tableaux(m)) CHECK(tangent_dimension(ct, excluded_roots(ct)).rank_u_ne == m.dim_m() - 3);

    for (int n = 1; n <= 7; ++n)
        for (auto& comp : compositions_of(n)) {
            auto dd = std::make_shared<const Diagram>(comp);
            for (auto& ct : component_tableaux(dd)) {
                INFO(comp.str());
                auto ex = excluded_roots(ct);
                auto rep = tangent_dimension(ct, ex);
                CHECK(rep.ok());
                if (n <= 6) CHECK(rep.rank_u_ne == tangent_rank_by_products(ct, ex));
            }
        }
}

TEST_CASE("orbital variety flags") {
    Diagram d(std::vector<int>{2, 1, 1, 1, 2});
    auto cts = component_tableaux(d);
    int orbital = 0;
    for (auto& ct : cts) {
        auto ex = excluded_roots(ct);
        auto rep = orbital_variety_test(ct, ex, 17);
        CHECK(rep.stable);
        CHECK(rep.status() == Status::Pass);
        bool middle = ct.ext.lowerings.back().entry == 3;
        CHECK(rep.orbital == middle);
        CHECK(rep.x_bracket_closed == middle);
        orbital += rep.orbital;
    }
    CHECK(orbital == 1);
    // no pairs: u is all of m, the Richardson orbit
    Diagram r(std::vector<int>{3, 2, 1});
    auto ct = component_tableaux(r)[0];
    auto rep = orbital_variety_test(ct, excluded_roots(ct), 1);
    CHECK(rep.orbital);
    CHECK(bracket_closed(positions({{1, 2}, {2, 3}, {1, 3}})));
    CHECK_FALSE(bracket_closed(positions({{1, 2}, {2, 3}})));
}

TEST_CASE("covering of circled positions") {
    Diagram d(std::vector<int>{1, 2, 1, 2});
    auto cts = component_tableaux(d);
    for (auto& ct : cts) {
        if (steps(ct) != std::vector<std::pair<int, int>>{{2, 1}, {3, 1}}) continue;
        auto ex = excluded_roots(ct);
        auto lp = label_partition(ct, ex);
        CHECK(lp.Z.count({1, 3}));
        CHECK(ct.e_support.count({1, 2}));
        CHECK(covering_check(ct, ex).ok);
    }
    for (int n = 1; n <= 8; ++n)
        for (auto& comp : compositions_of(n)) {
            auto dd = std::make_shared<const Diagram>(comp);
            for (auto& ct : component_tableaux(dd)) {
                INFO(comp.str());
                auto rep = covering_check(ct, excluded_roots(ct));
                CHECK(rep.ok);
            }
        }
}

TEST_CASE("injectivity witnesses on the worked examples") {
    auto witness = [](std::vector<int> c, std::vector<std::pair<int, int>> a, std::vector<std::pair<int, int>> b) {
        Diagram d(c);
        auto cts = component_tableaux(d);
        auto invs = all_invariants(d);
        int ia = -1, ib = -1;
        for (int k = 0; k < static_cast<int>(cts.size()); ++k) {
            if (steps(cts[k]) == a) ia = k;
            if (steps(cts[k]) == b) ib = k;
        }
        REQUIRE(ia >= 0);
        REQUIRE(ib >= 0);
        auto w = injectivity_witness(cts[ia], ia, cts[ib], ib, invs);
        CHECK(w.ok());
        CHECK(w.tableau == ia);
        CHECK(w.tableau_prime == ib);
        return w;
    };
    // 2 below 3 against 3 below 6: labels of (2,4) and (3,6) are exchanged
    auto w17 = witness({2, 1, 1, 2}, {{3, 1}, {2, 1}}, {{3, 1}, {3, 1}});
    CHECK(w17.line == Position{2, 4});
    CHECK(w17.line_prime == Position{3, 6});
    CHECK(w17.entry == 2);
    CHECK(w17.entry_prime == 3);

    auto w18 = witness({3, 2, 1, 3, 2, 1}, {{10, 1}, {5, 2}}, {{10, 1}, {8, 1}, {3, 1}});
    CHECK(w18.line_prime == Position{8, 11});
    auto w19 = witness({3, 2, 1, 2, 2, 1, 3}, {{5, 1}, {7, 2}, {3, 1}}, {{9, 1}, {5, 1}, {8, 1}, {3, 1}});
    CHECK(w19.line_prime == Position{9, 11});
    auto w20 = witness({3, 2, 1, 3, 1, 2}, {{7, 1}, {5, 2}}, {{7, 1}, {8, 1}, {3, 1}});
    CHECK(w20.line_prime == Position{8, 10});
}

TEST_CASE("every pair of tableaux is separated up to n = 7") {
    for (int n = 2; n <= 7; ++n)
        for (auto& comp : compositions_of(n)) {
            auto d = std::make_shared<const Diagram>(comp);
            auto cts = component_tableaux(d);
            if (cts.size() < 2) continue;
            SymbolicEngine sym(all_invariants(*d));
            RandomizedEngine rnd(d, 5);
            for (std::size_t a = 0; a < cts.size(); ++a)
                for (std::size_t b = a + 1; b < cts.size(); ++b) {
                    INFO(comp.str() << " " << a << "," << b);
                    auto w = injectivity_witness(cts[a], a, cts[b], b, sym);
                    CHECK(w.ok());
                    auto r = injectivity_witness(cts[a], a, cts[b], b, rnd);
                    CHECK(r.ok());
                    CHECK(r.line_prime == w.line_prime);
                }
        }
}
