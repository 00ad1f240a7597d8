#pragma once

#include <functional>
#include <random>
#include <unordered_map>

#include "linalg.hpp"
#include "poly.hpp"
#include "roots.hpp"

namespace ctab {

enum class AMode { AboveS, Full };

namespace detail {

struct MinorLayout {
    int first = 0, last = 0;  // contiguous entry range of [C,C']
    int s = 0;
    int size = 0;             // N - s
    // entry of the minor at (p,q), 0-based: 0 = zero, kParamA = a, otherwise a variable
    std::vector<std::vector<int>> slot;
};

inline MinorLayout minor_layout(const Diagram& d, const NeighbouringPair& pair, AMode mode) {
    MinorLayout L;
    L.first = d.first_entry(pair.left);
    L.last = d.last_entry(pair.right);
    L.s = pair.height;
    int N = L.last - L.first + 1;
    L.size = N - L.s;
    L.slot.assign(L.size, std::vector<int>(L.size, -1));
    for (int p = 0; p < L.size; ++p)
        for (int q = 0; q < L.size; ++q) {
            int row_entry = L.first + p + L.s, col_entry = L.first + q;
            if (q == p + L.s) {
                bool big = d.height(d.column_of(row_entry)) > L.s;
                L.slot[p][q] = (mode == AMode::Full || big) ? kParamA : -1;
            } else if (d.in_m(col_entry, row_entry)) {
                L.slot[p][q] = var_of(col_entry, row_entry);
            }
        }
    return L;
}

}  // namespace detail

// determinant of the lower left minor of (transpose of m) + a*Id, by row-wise Laplace over column subsets
inline Polynomial symbolic_minor(const Diagram& d, const NeighbouringPair& pair, AMode mode = AMode::AboveS) {
    auto L = detail::minor_layout(d, pair, mode);
    if (L.size == 0) return Polynomial::constant(1);
    if (L.size > 24) throw invalid_input("minor too large for symbolic expansion");
    std::unordered_map<std::uint32_t, Polynomial> layer{{0u, Polynomial::constant(1)}};
    for (int p = 0; p < L.size; ++p) {
        std::unordered_map<std::uint32_t, Polynomial> next;
        for (auto& [mask, poly] : layer) {
            for (int q = 0; q < L.size; ++q) {
                if (mask >> q & 1u) continue;
                int v = L.slot[p][q];
                if (v < 0) continue;
                int above = __builtin_popcount(mask >> (q + 1));
                next[mask | (1u << q)].add_times_var(poly, static_cast<Var>(v), above % 2 ? -1 : 1);
            }
        }
        for (auto it = next.begin(); it != next.end();)
            it = it->second.is_zero() ? next.erase(it) : std::next(it);
        layer = std::move(next);
    }
    auto it = layer.find((L.size >= 32 ? 0u : (1u << L.size)) - 1u);
    return it == layer.end() ? Polynomial{} : it->second;
}

struct InvariantRecord {
    NeighbouringPair pair;
    int d_D = 0;
    int true_degree = 0;
    Polynomial poly;
};

inline Polynomial normalize_sign(Polynomial p) {
    if (!p.is_zero() && p.terms().begin()->second < 0) p = -p;
    return p;
}

inline InvariantRecord extract_invariant(const Polynomial& minor, const Diagram& d, const NeighbouringPair& pair) {
    InvariantRecord rec{pair, ctab::d_D(d, pair), true_degree(d, pair), {}};
    for (int k = 0; k < rec.d_D; ++k)
        if (!minor.coefficient(kParamA, k).is_zero())
            throw internal_consistency("minor has a nonzero a^" + std::to_string(k) + " coefficient below a^d_D");
    rec.poly = normalize_sign(minor.coefficient(kParamA, rec.d_D));
    if (rec.poly.is_zero()) throw internal_consistency("invariant is zero");
    return rec;
}

inline InvariantRecord invariant(const Diagram& d, const NeighbouringPair& pair, AMode mode = AMode::AboveS) {
    return extract_invariant(symbolic_minor(d, pair, mode), d, pair);
}

// products of s disjoint left-to-right chains from C to C'
inline std::set<Monomial> chain_support(const Diagram& d, const NeighbouringPair& pair) {
    const int s = pair.height;
    std::set<Monomial> out;
    std::vector<int> ends(d.column(pair.left).begin(), d.column(pair.left).end());
    Monomial edges;

    auto rec = [&](auto&& self, int c) -> void {
        const auto& col = d.column(c);
        int h = static_cast<int>(col.size());
        int take = c == pair.right ? s : std::min(s, h);
        // choose `take` boxes of the column and give each one a distinct chain
        std::vector<int> chosen_box;
        std::vector<char> chain_used(s, 0);
        auto pick = [&](auto&& me, int box, int assigned) -> void {
            if (assigned == take) {
                std::vector<int> saved = ends;
                for (std::size_t k = 0; k < chosen_box.size(); k += 2) ends[chosen_box[k + 1]] = chosen_box[k];
                if (c == pair.right) {
                    Monomial m = edges;
                    std::sort(m.begin(), m.end());
                    out.insert(m);
                } else {
                    self(self, c + 1);
                }
                ends = saved;
                return;
            }
            if (h - box < take - assigned) return;
            for (int chain = 0; chain < s; ++chain) {
                if (chain_used[chain]) continue;
                chain_used[chain] = 1;
                chosen_box.push_back(col[box]);
                chosen_box.push_back(chain);
                edges.push_back(var_of(ends[chain], col[box]));
                me(me, box + 1, assigned + 1);
                edges.pop_back();
                chosen_box.pop_back();
                chosen_box.pop_back();
                chain_used[chain] = 0;
            }
            me(me, box + 1, assigned);
        };
        pick(pick, 0, 0);
    };
    rec(rec, pair.left + 1);
    return out;
}

using Assignment = std::map<Var, mpz_class>;

inline void check_assignment(const Assignment& a, const Diagram* d) {
    for (auto& [v, val] : a) {
        if (v == kParamA) continue;
        auto p = position_of(v);
        bool ok = p.i >= 1 && p.j > p.i && p.j <= kMaxEntries;
        if (d) ok = ok && p.j <= d->n() && d->in_m(p);
        if (!ok) throw invalid_input("unknown variable x" + std::to_string(p.i) + "_" + std::to_string(p.j));
    }
}

inline Polynomial evaluate(const Polynomial& poly, const Assignment& a, const Diagram* d = nullptr) {
    check_assignment(a, d);
    return poly.substitute(a);
}

inline Assignment zero_assignment(const PositionSet& zeros) {
    Assignment a;
    for (auto p : zeros) a[var_of(p)] = 0;
    return a;
}

// One -> 1, Star kept, everything else -> 0
inline Polynomial weierstrass_restrict(const ComponentTableau& ct, const Polynomial& inv) {
    Assignment a;
    for (Var v : inv.variables()) {
        auto p = position_of(v);
        if (ct.e_support.count(p)) a[v] = 1;
        else if (!ct.v_support.count(p)) a[v] = 0;
    }
    return inv.substitute(a);
}

// c * v with c = +-1 and v a Star variable
inline std::optional<Position> single_star(const ComponentTableau& ct, const Polynomial& restricted) {
    if (restricted.size() != 1) return std::nullopt;
    auto& [m, c] = *restricted.terms().begin();
    if (m.size() != 1 || (c != 1 && c != -1)) return std::nullopt;
    auto p = position_of(m[0]);
    if (!ct.v_support.count(p)) return std::nullopt;
    return p;
}

// numeric engine: exact a^{d_D} coefficient of the minor at integer values of the x variables
inline mpz_class numeric_invariant(const Diagram& d, const NeighbouringPair& pair, const std::function<mpz_class(Position)>& value) {
    auto L = detail::minor_layout(d, pair, AMode::AboveS);
    int dd = ctab::d_D(d, pair);
    if (L.size == 0) return 1;
    int slots = 0;
    for (int p = 0; p < L.size; ++p)
        for (int q = 0; q < L.size; ++q) slots += L.slot[p][q] == kParamA;
    IntMatrix base(L.size, std::vector<mpz_class>(L.size, 0));
    for (int p = 0; p < L.size; ++p)
        for (int q = 0; q < L.size; ++q)
            if (L.slot[p][q] > 0) base[p][q] = value(position_of(static_cast<Var>(L.slot[p][q])));
    // det(a) has degree <= slots; recover coefficients by solving the Vandermonde system exactly
    int pts = slots + 1;
    std::vector<mpq_class> values(pts);
    for (int x = 0; x < pts; ++x) {
        IntMatrix m = base;
        for (int p = 0; p < L.size; ++p)
            for (int q = 0; q < L.size; ++q)
                if (L.slot[p][q] == kParamA) m[p][q] = x;
        values[x] = bareiss_determinant(std::move(m));
    }
    // Newton divided differences, then expand to monomial coefficients
    std::vector<mpq_class> dd_coef = values;
    for (int k = 1; k < pts; ++k)
        for (int x = pts - 1; x >= k; --x) dd_coef[x] = (dd_coef[x] - dd_coef[x - 1]) / k;
    std::vector<mpq_class> coef(pts, 0);
    for (int k = pts - 1; k >= 0; --k) {
        // coef = coef * (a - k) + dd_coef[k]
        std::vector<mpq_class> next(pts, 0);
        for (int e = 0; e < pts; ++e) {
            if (coef[e] == 0) continue;
            if (e + 1 < pts) next[e + 1] += coef[e];
            next[e] -= coef[e] * k;
        }
        next[0] += dd_coef[k];
        coef = std::move(next);
    }
    for (int k = 0; k < dd; ++k)
        if (coef[k] != 0) throw internal_consistency("numeric minor has a nonzero a^" + std::to_string(k) + " coefficient below a^d_D");
    if (coef[dd].get_den() != 1) throw internal_consistency("non-integral interpolated coefficient");
    return coef[dd].get_num();
}

// lowest power of a present in a raw minor
inline int a_valuation(const Polynomial& minor) { return minor.min_degree_in(kParamA); }

// Id_{>s} and full Id must give the same invariant
inline bool full_id_agrees(const Diagram& d, const NeighbouringPair& pair) {
    return invariant(d, pair, AMode::AboveS).poly == invariant(d, pair, AMode::Full).poly;
}

// fast path: no perfect matching through the surviving slots means the minor is 0 for every a
inline bool structurally_zero(const Diagram& d, const NeighbouringPair& pair, const PositionSet& zeros) {
    auto L = detail::minor_layout(d, pair, AMode::AboveS);
    std::vector<std::vector<int>> adj(L.size);
    for (int p = 0; p < L.size; ++p)
        for (int q = 0; q < L.size; ++q) {
            int v = L.slot[p][q];
            if (v < 0) continue;
            if (v != kParamA && zeros.count(position_of(static_cast<Var>(v)))) continue;
            adj[p].push_back(q);
        }
    std::vector<int> match(L.size, -1);
    for (int p = 0; p < L.size; ++p) {
        std::vector<char> seen(L.size, 0);
        auto augment = [&](auto&& self, int row) -> bool {
            for (int q : adj[row]) {
                if (seen[q]) continue;
                seen[q] = 1;
                if (match[q] < 0 || self(self, match[q])) {
                    match[q] = row;
                    return true;
                }
            }
            return false;
        };
        if (!augment(augment, p)) return true;
    }
    return false;
}

struct VanishingResult {
    int pair = 0;
    bool global = false;    // zero after X -> 0
    bool specific = false;  // zero after E -> 0
    bool structural = false;
    std::optional<Monomial> witness;  // a surviving monomial when global fails
};

inline VanishingResult vanishing_result(const Diagram& d, const InvariantRecord& inv, int pair_idx, const PositionSet& X, const PositionSet& E) {
    VanishingResult r;
    r.pair = pair_idx;
    auto rest = inv.poly.substitute(zero_assignment(X));
    r.global = rest.is_zero();
    if (!r.global) r.witness = rest.terms().begin()->first;
    r.specific = inv.poly.substitute(zero_assignment(E)).is_zero();
    r.structural = structurally_zero(d, inv.pair, X);
    if (r.structural && !r.global) throw internal_consistency("structural shortcut disagrees with the polynomial engine");
    return r;
}

struct ExceptionalReport {
    int monomials = 0;      // chain monomials with an exceptional constituent
    int strong_fail = 0;    // an exceptional constituent outside E
    int weak_fail = 0;      // no constituent in E at all
};

// exceptional constituent (i,j): in the hatted tableau j sits in a column weakly left of i
inline ExceptionalReport exceptional_constituents(const Diagram& d, const NeighbouringPair& pair, const PositionSet& E, const Columns& hatted) {
    std::vector<int> col(d.n() + 1, 0);
    for (std::size_t c = 1; c < hatted.size(); ++c)
        for (int e : hatted[c]) col[e] = static_cast<int>(c);
    ExceptionalReport rep;
    for (const auto& m : chain_support(d, pair)) {
        bool exceptional = false, all_in = true, any_in = false;
        for (Var v : m) {
            auto p = position_of(v);
            bool in = E.count(p) > 0;
            any_in |= in;
            if (col[p.j] <= col[p.i]) {
                exceptional = true;
                all_in &= in;
            }
        }
        if (!exceptional) continue;
        ++rep.monomials;
        rep.strong_fail += !all_in;
        rep.weak_fail += !any_in;
    }
    return rep;
}

// randomized probe for large n: invariant value with X zeroed and the rest random, over several trials
inline bool random_vanishing(const Diagram& d, const NeighbouringPair& pair, const PositionSet& zeros, std::mt19937_64& rng, int trials = 8) {
    std::uniform_int_distribution<std::uint32_t> coef;
    for (int t = 0; t < trials; ++t) {
        std::map<Position, mpz_class> vals;
        auto value = [&](Position p) -> mpz_class {
            if (zeros.count(p)) return 0;
            auto [it, fresh] = vals.try_emplace(p, 0);
            if (fresh) it->second = coef(rng);
            return it->second;
        };
        if (numeric_invariant(d, pair, value) != 0) return false;
    }
    return true;
}

// randomized Weierstrass probe: One -> 1, Star -> random, rest -> 0; the value must be +-one star value
// and that star must stay the same over all trials
inline std::optional<Position> random_single_star(const ComponentTableau& ct, const NeighbouringPair& pair, std::mt19937_64& rng, int trials = 8) {
    std::uniform_int_distribution<std::uint32_t> coef(2, 0xffffffffu);
    std::optional<Position> found;
    for (int t = 0; t < trials; ++t) {
        std::map<Position, mpz_class> star;
        for (auto p : ct.v_support) star[p] = coef(rng);
        auto value = [&](Position p) -> mpz_class {
            if (ct.e_support.count(p)) return 1;
            auto it = star.find(p);
            return it == star.end() ? mpz_class(0) : it->second;
        };
        mpz_class v = numeric_invariant(ct.diag(), pair, value);
        std::optional<Position> hit;
        for (auto& [p, x] : star)
            if (x == v || x == -v) hit = p;
        if (!hit || (found && *found != *hit)) return std::nullopt;
        found = hit;
    }
    return found;
}

// what the downstream checks need to know about the invariants of one diagram
class InvariantEngine {
public:
    virtual ~InvariantEngine() = default;
    virtual const char* name() const = 0;
    // invariant of pair q is identically zero once `zeros` are set to 0
    virtual bool vanishes(int q, const PositionSet& zeros) = 0;
    // the Star variable the restricted invariant reduces to, up to sign
    virtual std::optional<Position> star(const ComponentTableau& ct, int q) = 0;
    // value at the matrix with 1 on `ones` and 0 elsewhere is nonzero
    virtual bool nonzero_at(int q, const PositionSet& ones) = 0;
};

class SymbolicEngine : public InvariantEngine {
public:
    explicit SymbolicEngine(std::vector<InvariantRecord> invs) : invs_(std::move(invs)) {}
    const char* name() const override { return "symbolic"; }
    bool vanishes(int q, const PositionSet& zeros) override { return invs_.at(q).poly.substitute(zero_assignment(zeros)).is_zero(); }
    std::optional<Position> star(const ComponentTableau& ct, int q) override {
        return single_star(ct, weierstrass_restrict(ct, invs_.at(q).poly));
    }
    bool nonzero_at(int q, const PositionSet& ones) override {
        Assignment at;
        for (Var v : invs_.at(q).poly.variables()) at[v] = ones.count(position_of(v)) ? 1 : 0;
        return !invs_.at(q).poly.substitute(at).is_zero();
    }
    const std::vector<InvariantRecord>& invariants() const { return invs_; }

private:
    std::vector<InvariantRecord> invs_;
};

// exact evaluation at random points; "vanishes" is probabilistic, the other two answers are exact per trial
class RandomizedEngine : public InvariantEngine {
public:
    RandomizedEngine(std::shared_ptr<const Diagram> d, std::uint64_t seed, int trials = 8)
        : d_(std::move(d)), rng_(seed), trials_(trials) {}
    const char* name() const override { return "randomized"; }
    bool vanishes(int q, const PositionSet& zeros) override { return random_vanishing(*d_, d_->pairs().at(q), zeros, rng_, trials_); }
    std::optional<Position> star(const ComponentTableau& ct, int q) override {
        return random_single_star(ct, d_->pairs().at(q), rng_, trials_);
    }
    bool nonzero_at(int q, const PositionSet& ones) override {
        return numeric_invariant(*d_, d_->pairs().at(q), [&](Position p) { return mpz_class(ones.count(p) ? 1 : 0); }) != 0;
    }

private:
    std::shared_ptr<const Diagram> d_;
    std::mt19937_64 rng_;
    int trials_;
};

}  // namespace ctab
