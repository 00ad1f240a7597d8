#pragma once

#include <random>

#include "invariants.hpp"

namespace ctab {

struct LabelPartition {
    PositionSet S, Y, X, Z;
};

inline LabelPartition label_partition(const ComponentTableau& ct, const ExcludedRootSet& ex) {
    LabelPartition lp{ct.e_support, ct.v_support, ex.X, {}};
    for (auto p : ex.X)
        if (!ct.v_support.count(p)) lp.Z.insert(p);
    return lp;
}

struct CoveringReport {
    bool ok = true;
    bool unique_ok = true;
    bool star_in_x = true;
    bool one_outside_x = true;
    std::vector<Position> uncovered, ambiguous, stray_star, encircled_one;
};

inline CoveringReport covering_check(const ComponentTableau& ct, const ExcludedRootSet& ex) {
    CoveringReport rep;
    auto lp = label_partition(ct, ex);
    for (auto z : lp.Z) {
        int covers = 0;
        for (auto s : lp.S)
            if (s.i == z.i && s.j < z.j) ++covers;
        if (covers == 0) rep.uncovered.push_back(z);
        if (covers > 1) rep.ambiguous.push_back(z);
    }
    for (auto y : lp.Y)
        if (!lp.X.count(y)) rep.stray_star.push_back(y);
    for (auto s : lp.S)
        if (lp.X.count(s)) rep.encircled_one.push_back(s);
    rep.star_in_x = rep.stray_star.empty();
    rep.one_outside_x = rep.encircled_one.empty();
    rep.unique_ok = rep.ambiguous.empty();
    rep.ok = rep.uncovered.empty() && rep.unique_ok && rep.star_in_x && rep.one_outside_x;
    return rep;
}

// ranks of powers; the k-th conjugate part is r_{k-1} - r_k
inline std::vector<int> jordan_type(const IntMatrix& m) {
    const int n = static_cast<int>(m.size());
    std::vector<int> ranks{n};
    IntMatrix power = m;
    for (int k = 1; k <= n + 1; ++k) {
        int r = bareiss_rank(power);
        ranks.push_back(r);
        if (r == 0) break;
        if (k == n + 1 || r == ranks[ranks.size() - 2]) throw invalid_input("matrix is not nilpotent");
        power = multiply(power, m);
    }
    std::vector<int> conj;
    for (std::size_t k = 1; k < ranks.size(); ++k) conj.push_back(ranks[k - 1] - ranks[k]);
    std::vector<int> parts;
    int blocks = conj.empty() ? 0 : conj[0];
    for (int b = 0; b < blocks; ++b) {
        int size = 0;
        for (int c : conj)
            if (c > b) ++size;
        parts.push_back(size);
    }
    return parts;
}

inline std::vector<int> conjugate(const std::vector<int>& parts) {
    std::vector<int> out;
    if (parts.empty()) return out;
    for (int len = 1; len <= parts.front(); ++len)
        out.push_back(static_cast<int>(std::count_if(parts.begin(), parts.end(), [&](int p) { return p >= len; })));
    return out;
}

inline int orbit_dimension(const std::vector<int>& jordan) {
    int n = std::accumulate(jordan.begin(), jordan.end(), 0);
    int sq = 0;
    for (int c : conjugate(jordan)) sq += c * c;
    return n * n - sq;
}

inline IntMatrix matrix_on(int n, const PositionSet& support, const std::function<mpz_class(Position)>& coeff) {
    IntMatrix m(n, std::vector<mpz_class>(n, 0));
    for (auto p : support) m[p.i - 1][p.j - 1] = coeff(p);
    return m;
}

inline IntMatrix e_matrix(const ComponentTableau& ct) {
    return matrix_on(ct.diag().n(), ct.e_support, [](Position) { return mpz_class(1); });
}

struct DimensionReport {
    int dim_m = 0, g = 0;
    int dim_u = 0;
    int rank_u_ne = 0;    // dim(u + [n,e])
    int rank_ne = 0, rank_ne_y = 0, rank_total = 0;
    bool dim_ok = false;          // rank_u_ne = dim m - g
    bool ne_y_trivial = false;    // [n,e] meets the span of Y trivially
    bool direct_sum_ok = false;   // (u + [n,e]) + Y = m, direct
    std::vector<int> jordan_e;
    int orbit_dim_e = 0;
    bool ok() const { return dim_ok && ne_y_trivial && direct_sum_ok; }
};

inline DimensionReport tangent_dimension(const ComponentTableau& ct, const ExcludedRootSet& ex) {
    const Diagram& d = ct.diag();
    DimensionReport rep;
    rep.dim_m = d.dim_m();
    rep.g = d.generator_count();
    rep.dim_u = static_cast<int>(ex.u.size());
    auto mpos = d.m_positions();
    std::map<Position, int> index;
    for (std::size_t k = 0; k < mpos.size(); ++k) index[mpos[k]] = static_cast<int>(k);
    const int dim = rep.dim_m;

    IntMatrix ne;
    for (int i = 1; i <= d.n(); ++i)
        for (int j = i + 1; j <= d.n(); ++j) {
            std::vector<mpz_class> row(dim, 0);
            bool any = false;
            for (auto s : ct.e_support) {
                if (s.i == j) {
                    row[index.at({i, s.j})] += 1;
                    any = true;
                }
                if (s.j == i) {
                    row[index.at({s.i, j})] -= 1;
                    any = true;
                }
            }
            if (any) ne.push_back(std::move(row));
        }
    auto unit = [&](Position p) {
        std::vector<mpz_class> row(dim, 0);
        row[index.at(p)] = 1;
        return row;
    };
    IntMatrix y_rows;
    for (auto p : ct.v_support) y_rows.push_back(unit(p));
    IntMatrix u_rows;
    for (auto p : ex.u) u_rows.push_back(unit(p));

    auto concat = [](std::initializer_list<const IntMatrix*> parts) {
        IntMatrix out;
        for (auto* p : parts) out.insert(out.end(), p->begin(), p->end());
        return out;
    };
    rep.rank_ne = bareiss_rank(ne);
    rep.rank_u_ne = bareiss_rank(concat({&u_rows, &ne}));
    rep.rank_ne_y = bareiss_rank(concat({&ne, &y_rows}));
    rep.rank_total = bareiss_rank(concat({&u_rows, &ne, &y_rows}));
    int y = static_cast<int>(ct.v_support.size());
    rep.dim_ok = rep.rank_u_ne == rep.dim_m - rep.g;
    rep.ne_y_trivial = rep.rank_ne_y == rep.rank_ne + y;
    rep.direct_sum_ok = rep.rank_total == rep.dim_m && rep.rank_u_ne + y == rep.dim_m;
    rep.jordan_e = jordan_type(e_matrix(ct));
    rep.orbit_dim_e = orbit_dimension(rep.jordan_e);
    return rep;
}

enum class Status { Pass, Violation, Inconclusive };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Violation: return "violation";
        default: return "inconclusive";
    }
}

struct OrbitalReport {
    std::vector<int> sample_dims;
    int generic_dim = 0;
    int at_max = 0;
    bool stable = false;
    bool orbital = false;          // 2(dim m - g) equals the generic orbit dimension
    bool x_bracket_closed = false;
    std::vector<int> generic_jordan;
    Status status() const { return stable ? Status::Pass : Status::Inconclusive; }
};

inline bool bracket_closed(const PositionSet& set) {
    for (auto p : set)
        for (auto q : set)
            if (p.j == q.i && !set.count({p.i, q.j})) return false;
    return true;
}

inline OrbitalReport orbital_variety_test(const ComponentTableau& ct, const ExcludedRootSet& ex, std::uint64_t seed, int samples = 5) {
    OrbitalReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned long> coef(1, (1ul << 31) - 1);
    for (int k = 0; k < samples; ++k) {
        auto m = matrix_on(ct.diag().n(), ex.u, [&](Position) { return mpz_class(coef(rng)); });
        auto jt = jordan_type(m);
        int dim = orbit_dimension(jt);
        rep.sample_dims.push_back(dim);
        if (dim > rep.generic_dim || k == 0) {
            rep.generic_dim = dim;
            rep.generic_jordan = jt;
        }
    }
    rep.at_max = static_cast<int>(std::count(rep.sample_dims.begin(), rep.sample_dims.end(), rep.generic_dim));
    rep.stable = rep.at_max >= std::min(3, samples);
    const Diagram& d = ct.diag();
    rep.orbital = 2 * (d.dim_m() - d.generator_count()) == rep.generic_dim;
    rep.x_bracket_closed = bracket_closed(ex.X);
    return rep;
}

struct InjectivityWitness {
    int first = 0, second = 0;       // tableau indices as given
    int tableau = 0, tableau_prime = 0;  // which index plays C and which plays C'
    int pair = -1;                   // first differing pair in (height, left) order
    int entry = 0, entry_prime = 0;  // i and i', the entries using the pair in C and C'
    Position line{}, line_prime{};   // l (Star in C) and l' (Star in C', the rightmost line)
    bool roles_follow_entries = false;  // i < i' agrees with the rightmost line
    bool exchange_ok = false;
    bool quadrant_clear = false;
    bool specific_vanishing = false;
    bool nonvanishing = false;
    std::string detail;
    bool ok() const { return exchange_ok && quadrant_clear && specific_vanishing && nonvanishing; }
};

// invariants indexed by pair
inline InjectivityWitness injectivity_witness(const ComponentTableau& a, int a_index, const ComponentTableau& b, int b_index,
                                              InvariantEngine& engine) {
    InjectivityWitness w;
    w.first = a_index;
    w.second = b_index;
    const Diagram& d = a.diag();
    auto user = [](const ComponentTableau& ct, int q) { return ct.ext.lowerings[ct.ext.consumed_by[q]].entry; };
    for (int q = 0; q < d.generator_count(); ++q)
        if (user(a, q) != user(b, q)) {
            w.pair = q;
            break;
        }
    if (w.pair < 0) {
        w.detail = "no pair is used by different entries";
        return w;
    }
    int q = w.pair;
    auto la = engine.star(a, q);
    auto lb = engine.star(b, q);
    if (!la || !lb) {
        w.detail = "restricted invariant is not a single starred variable";
        return w;
    }
    // the rightmost of the two exchanged lines is l'; C' is the tableau where it is starred
    int ca = d.column_of(la->j), cb = d.column_of(lb->j);
    bool a_prime = ca != cb ? ca > cb : user(a, q) > user(b, q);
    const ComponentTableau& C = a_prime ? b : a;
    const ComponentTableau& Cp = a_prime ? a : b;
    w.tableau = a_prime ? b_index : a_index;
    w.tableau_prime = a_prime ? a_index : b_index;
    w.line = a_prime ? *lb : *la;
    w.line_prime = a_prime ? *la : *lb;
    w.entry = user(C, q);
    w.entry_prime = user(Cp, q);
    w.roles_follow_entries = w.entry < w.entry_prime;

    std::ostringstream why;
    w.exchange_ok = w.line.i == w.entry && w.line_prime.i == w.entry_prime && C.e_support.count(w.line_prime) &&
                    Cp.e_support.count(w.line);
    if (!w.exchange_ok) why << "labels of " << str(w.line) << "," << str(w.line_prime) << " are not exchanged; ";

    auto rec = penetrating_string(C, q);
    w.quadrant_clear = true;
    for (auto p : rec.E)
        if (p.i <= w.line_prime.i && p.j >= w.line_prime.j && !(p == w.line_prime)) {
            w.quadrant_clear = false;
            why << "excluded " << str(p) << " lies in the quadrant of " << str(w.line_prime) << "; ";
        }
    w.specific_vanishing = engine.vanishes(q, rec.E);
    if (!w.specific_vanishing) why << "invariant survives zeroing the string's exclusions; ";

    PositionSet ones = Cp.e_support;
    ones.insert(w.line_prime);
    w.nonvanishing = engine.nonzero_at(q, ones);
    if (!w.nonvanishing) why << "invariant vanishes at e + x" << str(w.line_prime) << "; ";
    w.detail = why.str();
    return w;
}

inline InjectivityWitness injectivity_witness(const ComponentTableau& a, int a_index, const ComponentTableau& b, int b_index,
                                              const std::vector<InvariantRecord>& invariants) {
    SymbolicEngine engine(invariants);
    return injectivity_witness(a, a_index, b, b_index, engine);
}

// distinct invariants use disjoint sets of variables
inline bool disjoint_variables(const std::vector<InvariantRecord>& invs) {
    std::set<Var> seen;
    for (auto& r : invs)
        for (Var v : r.poly.variables())
            if (!seen.insert(v).second) return false;
    return true;
}

}  // namespace ctab
