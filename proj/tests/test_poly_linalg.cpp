#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace ctab;
using oracle::operator+;
using oracle::operator-;

namespace {

Polynomial x(int i, int j) { return Polynomial::variable(var_of(i, j)); }

IntMatrix random_matrix(std::mt19937& rng, int rows, int cols, int lo, int hi) {
    std::uniform_int_distribution<int> v(lo, hi);
    IntMatrix m(rows, std::vector<mpz_class>(cols));
    for (auto& r : m)
        for (auto& e : r) e = v(rng);
    return m;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
    auto p = x(1, 2) * x(2, 4) + x(1, 3) * x(3, 4);
    CHECK(p.size() == 2);
    CHECK(p.str() == "x1_2*x2_4 + x1_3*x3_4");
    CHECK((p - p).is_zero());
    CHECK((-p).str() == "-x1_2*x2_4 - x1_3*x3_4");
    // (x12 + x13)^2 has a middle coefficient of 2
    auto s = x(1, 2) + x(1, 3);
    auto sq = s * s;
    CHECK(sq.str() == "x1_2^2 + 2*x1_2*x1_3 + x1_3^2");
    CHECK(Polynomial::constant(0).is_zero());
    CHECK(Polynomial::constant(-3).str() == "-3");

    Polynomial acc;
    acc.add_times_var(p, var_of(5, 6), -1);
    CHECK(acc.str() == "-x1_2*x2_4*x5_6 - x1_3*x3_4*x5_6");
}

TEST_CASE("coefficients in a") {
    auto a = Polynomial::variable(kParamA);
    auto p = a * a * x(1, 2) + a * x(2, 3) + Polynomial::constant(7);
    CHECK(p.coefficient(kParamA, 0).str() == "7");
    CHECK(p.coefficient(kParamA, 1).str() == "x2_3");
    CHECK(p.coefficient(kParamA, 2).str() == "x1_2");
    CHECK(p.coefficient(kParamA, 3).is_zero());
    CHECK(p.min_degree_in(kParamA) == 0);
    CHECK((a * x(1, 2)).min_degree_in(kParamA) == 1);
    CHECK(p.variables() == std::set<Var>{kParamA, var_of(1, 2), var_of(2, 3)});
}

TEST_CASE("substitution keeps unassigned variables") {
    auto p = x(1, 2) * x(2, 4) + x(1, 3) * x(3, 4);
    std::map<Var, mpz_class> at{{var_of(1, 2), 1}, {var_of(1, 3), 0}};
    CHECK(p.substitute(at).str() == "x2_4");
    std::map<Var, mpz_class> all{{var_of(1, 2), 2}, {var_of(2, 4), 3}, {var_of(1, 3), 5}, {var_of(3, 4), 7}};
    CHECK(p.substitute(all).str() == "41");
}

TEST_CASE("polynomial json round trip") {
    auto a = Polynomial::variable(kParamA);
    auto p = a * x(1, 3) * x(2, 4) - Polynomial::constant(12) * x(1, 4) * x(2, 3);
    auto j = to_json(p);
    CHECK(polynomial_from_json(nlohmann::json::parse(j.dump())) == p);
    CHECK(j[0].dump() == R"({"coeff":"1","vars":[[1,3],[2,4]],"aPow":1})");
}

TEST_CASE("fraction-free determinant and rank") {
    std::mt19937 rng(7);
    for (int n = 1; n <= 6; ++n)
        for (int rep = 0; rep < 20; ++rep) {
            auto m = random_matrix(rng, n, n, -3, 3);
            CHECK(bareiss_determinant(m) == oracle::leibniz(m));
            CHECK(bareiss_rank(m) == oracle::rational_rank(m));
        }
    for (int rep = 0; rep < 30; ++rep) {
        // low rank products and rectangular shapes
        auto a = random_matrix(rng, 5, 2, -4, 4), b = random_matrix(rng, 2, 7, -4, 4);
        auto prod = multiply(a, b);
        CHECK(bareiss_rank(prod) == oracle::rational_rank(prod));
        CHECK(bareiss_rank(prod) <= 2);
        auto wide = random_matrix(rng, 3, 8, 0, 1);
        CHECK(bareiss_rank(wide) == oracle::rational_rank(wide));
    }
    CHECK(bareiss_rank({}) == 0);
    IntMatrix zero(3, std::vector<mpz_class>(4, 0));
    CHECK(is_zero(zero));
    CHECK(bareiss_rank(zero) == 0);
    CHECK(bareiss_determinant(IntMatrix(3, std::vector<mpz_class>(3, 0))) == 0);
}
