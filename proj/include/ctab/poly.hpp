#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "core.hpp"

namespace ctab {

// variable 0 is the auxiliary parameter a; x*_{i,j} is i*64+j
using Var = std::uint16_t;
constexpr Var kParamA = 0;
constexpr int kMaxEntries = 63;

inline Var var_of(int i, int j) { return static_cast<Var>(i * 64 + j); }
inline Var var_of(Position p) { return var_of(p.i, p.j); }
inline Position position_of(Var v) { return {v / 64, v % 64}; }

// sorted multiset of variables
using Monomial = std::vector<Var>;

template <class Coeff = mpz_class>
class SparsePolynomial {
public:
    using Terms = std::map<Monomial, Coeff>;

    SparsePolynomial() = default;
    static SparsePolynomial constant(const Coeff& c) {
        SparsePolynomial p;
        if (c != 0) p.terms_[{}] = c;
        return p;
    }
    static SparsePolynomial variable(Var v) {
        SparsePolynomial p;
        p.terms_[{v}] = 1;
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(Monomial m, const Coeff& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(std::move(m), c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    SparsePolynomial& operator+=(const SparsePolynomial& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    SparsePolynomial operator-() const {
        SparsePolynomial p = *this;
        for (auto& [m, c] : p.terms_) c = -c;
        return p;
    }
    SparsePolynomial& operator-=(const SparsePolynomial& o) { return *this += -o; }

    friend SparsePolynomial operator*(const SparsePolynomial& x, const SparsePolynomial& y) {
        SparsePolynomial out;
        for (auto& [m1, c1] : x.terms_)
            for (auto& [m2, c2] : y.terms_) {
                Monomial m(m1.size() + m2.size());
                std::merge(m1.begin(), m1.end(), m2.begin(), m2.end(), m.begin());
                out.add_term(std::move(m), c1 * c2);
            }
        return out;
    }

    // this * sign * v, for accumulation in determinant expansions
    void add_times_var(const SparsePolynomial& x, Var v, int sign) {
        for (auto& [m, c] : x.terms_) {
            Monomial m2;
            m2.reserve(m.size() + 1);
            auto pos = std::upper_bound(m.begin(), m.end(), v);
            m2.insert(m2.end(), m.begin(), pos);
            m2.push_back(v);
            m2.insert(m2.end(), pos, m.end());
            add_term(std::move(m2), sign > 0 ? Coeff(c) : Coeff(-c));
        }
    }

    bool operator==(const SparsePolynomial& o) const { return terms_ == o.terms_; }

    int degree_in(Var v, const Monomial& m) const { return static_cast<int>(std::count(m.begin(), m.end(), v)); }

    // coefficient of v^k, as a polynomial in the remaining variables
    SparsePolynomial coefficient(Var v, int k) const {
        SparsePolynomial out;
        for (auto& [m, c] : terms_) {
            if (degree_in(v, m) != k) continue;
            Monomial rest;
            for (Var w : m)
                if (w != v) rest.push_back(w);
            out.add_term(std::move(rest), c);
        }
        return out;
    }

    int min_degree_in(Var v) const {
        int best = -1;
        for (auto& [m, c] : terms_) {
            int d = degree_in(v, m);
            if (best < 0 || d < best) best = d;
        }
        return best;
    }

    std::set<Var> variables() const {
        std::set<Var> out;
        for (auto& [m, c] : terms_) out.insert(m.begin(), m.end());
        return out;
    }

    // substitute values for some variables; the rest stay symbolic
    template <class Map>
    SparsePolynomial substitute(const Map& values) const {
        SparsePolynomial out;
        for (auto& [m, c] : terms_) {
            Coeff coef = c;
            Monomial rest;
            for (Var w : m) {
                auto it = values.find(w);
                if (it == values.end()) rest.push_back(w);
                else coef *= it->second;
                if (coef == 0) break;
            }
            if (coef != 0) out.add_term(std::move(rest), coef);
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto& [m, c] : terms_) {
            Coeff mag = c < 0 ? Coeff(-c) : c;
            s += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            first = false;
            bool unit = mag == 1 && !m.empty();
            if (!unit) s += to_string(mag);
            std::size_t idx = 0;
            while (idx < m.size()) {
                std::size_t run = idx;
                while (run < m.size() && m[run] == m[idx]) ++run;
                if (!unit || idx > 0) s += "*";
                s += var_name(m[idx]);
                if (run - idx > 1) s += "^" + std::to_string(run - idx);
                idx = run;
            }
        }
        return s;
    }

    static std::string var_name(Var v) {
        if (v == kParamA) return "a";
        auto p = position_of(v);
        return "x" + std::to_string(p.i) + "_" + std::to_string(p.j);
    }

private:
    static std::string to_string(const Coeff& c) {
        if constexpr (std::is_same_v<Coeff, mpz_class>) return c.get_str();
        else return std::to_string(c);
    }

    Terms terms_;
};

using Polynomial = SparsePolynomial<mpz_class>;

template <class Coeff>
nlohmann::ordered_json to_json(const SparsePolynomial<Coeff>& p) {
    auto arr = nlohmann::ordered_json::array();
    for (auto& [m, c] : p.terms()) {
        auto vars = nlohmann::ordered_json::array();
        int apow = 0;
        for (Var v : m) {
            if (v == kParamA) ++apow;
            else vars.push_back({position_of(v).i, position_of(v).j});
        }
        nlohmann::ordered_json t;
        if constexpr (std::is_same_v<Coeff, mpz_class>) t["coeff"] = c.get_str();
        else t["coeff"] = c;
        t["vars"] = vars;
        t["aPow"] = apow;
        arr.push_back(t);
    }
    return arr;
}

inline Polynomial polynomial_from_json(const nlohmann::json& arr) {
    Polynomial p;
    for (auto& t : arr) {
        Monomial m;
        for (auto& v : t.at("vars")) m.push_back(var_of(v.at(0).get<int>(), v.at(1).get<int>()));
        for (int k = 0; k < t.at("aPow").get<int>(); ++k) m.push_back(kParamA);
        std::sort(m.begin(), m.end());
        p.add_term(std::move(m), mpz_class(t.at("coeff").get<std::string>()));
    }
    return p;
}

}  // namespace ctab
