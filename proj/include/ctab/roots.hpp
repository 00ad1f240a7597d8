#pragma once

#include "builder.hpp"

namespace ctab {

using Columns = std::vector<std::vector<int>>;  // slot 0 unused

// columns read bottom to top, leftmost column first
inline std::vector<int> word_form(const Columns& cols, int n) {
    std::vector<int> w;
    std::vector<char> seen(n + 1, 0);
    for (std::size_t c = 1; c < cols.size(); ++c)
        for (auto it = cols[c].rbegin(); it != cols[c].rend(); ++it) {
            int e = *it;
            if (e < 1 || e > n || seen[e]) throw invalid_input("tableau entries are not a permutation of 1.." + std::to_string(n));
            seen[e] = 1;
            w.push_back(e);
        }
    if (static_cast<int>(w.size()) != n) throw invalid_input("tableau entries are not a permutation of 1.." + std::to_string(n));
    return w;
}

inline PositionSet excluded_from_word(const std::vector<int>& w, const Diagram& d) {
    std::vector<int> pos(w.size() + 1);
    for (std::size_t k = 0; k < w.size(); ++k) pos[w[k]] = static_cast<int>(k);
    PositionSet out;
    for (int i = 1; i <= d.n(); ++i)
        for (int j = i + 1; j <= d.n(); ++j)
            if (pos[i] > pos[j] && d.in_m(i, j)) out.insert({i, j});
    return out;
}

struct ShiftedTableau {
    Columns columns;
    int entry = 0;            // i
    int home = 0;             // C_h, the column of i in T
    int f = 0;                // row of i
    std::vector<int> chain;   // g_0 < g_1 < ... < g_v = h
    std::vector<int> stack;   // entries placed below i
};

// place `stack` below i after deleting it from wherever it sits, displacing the partial columns below row f leftwards
inline ShiftedTableau shift_below(const Diagram& d, int i, const std::vector<int>& stack) {
    ShiftedTableau st;
    st.entry = i;
    st.home = d.column_of(i);
    st.f = d.row_of(i);
    st.stack = stack;
    int g = 0;
    for (int c = st.home; c >= 1 && !g; --c)
        if (d.height(c) == st.f) g = c;
    if (!g)
        throw construction_violation("no column of height " + std::to_string(st.f) + " at or left of C" + std::to_string(st.home) +
                                     " when shifting below " + std::to_string(i));
    st.chain.push_back(g);
    for (int c = g + 1; c <= st.home; ++c)
        if (d.height(c) > st.f) st.chain.push_back(c);
    if (st.chain.back() != st.home) throw construction_violation("shift chain does not end at the column of i");

    Columns cols = d.columns();
    for (int e : stack) {
        auto& col = cols[d.column_of(e)];
        col.erase(std::find(col.begin(), col.end(), e));
    }
    const Columns& orig = d.columns();
    for (std::size_t k = 1; k < st.chain.size(); ++k) {
        int to = st.chain[k - 1], from = st.chain[k];
        std::vector<int> next(orig[to].begin(), orig[to].begin() + st.f);
        next.insert(next.end(), orig[from].begin() + st.f, orig[from].end());
        cols[to] = std::move(next);
    }
    std::vector<int> home(orig[st.home].begin(), orig[st.home].begin() + st.f);
    home.insert(home.end(), stack.begin(), stack.end());
    cols[st.home] = std::move(home);
    st.columns = std::move(cols);
    return st;
}

struct GeneratorExclusions {
    Generator generator;
    ShiftedTableau shifted;
    PositionSet primary, secondary;
};

inline GeneratorExclusions generator_exclusions(const Diagram& d, const Generator& gen) {
    GeneratorExclusions ge{gen, shift_below(d, gen.entry, gen.targets), {}, {}};
    std::set<int> targets(gen.targets.begin(), gen.targets.end());
    for (auto p : excluded_from_word(word_form(ge.shifted.columns, d.n()), d))
        (targets.count(p.j) ? ge.primary : ge.secondary).insert(p);
    return ge;
}

inline ShiftedTableau shifted_tableau(const ComponentTableau& ct, const Generator& gen) {
    return shift_below(ct.diag(), gen.entry, gen.targets);
}

struct ExcludedRootSet {
    std::vector<GeneratorExclusions> per_generator;
    PositionSet X;
    PositionSet primary, secondary;  // unions; a position may be in both
    PositionSet u;                   // support of the complement in m
};

inline ExcludedRootSet excluded_roots(const ComponentTableau& ct) {
    ExcludedRootSet ex;
    for (const auto& gen : ct.generators()) {
        auto ge = generator_exclusions(ct.diag(), gen);
        ex.primary.insert(ge.primary.begin(), ge.primary.end());
        ex.secondary.insert(ge.secondary.begin(), ge.secondary.end());
        ex.X.insert(ge.primary.begin(), ge.primary.end());
        ex.X.insert(ge.secondary.begin(), ge.secondary.end());
        ex.per_generator.push_back(std::move(ge));
    }
    for (auto p : ct.diag().m_positions())
        if (!ex.X.count(p)) ex.u.insert(p);
    return ex;
}

// positions of u composing into m must land in u; compositions into the Levi are ignored
inline bool u_bracket_closed(const Diagram& d, const PositionSet& u) {
    for (auto p : u)
        for (auto q : u)
            if (p.j == q.i && d.in_m(p.i, q.j) && !u.count({p.i, q.j})) return false;
    return true;
}

// u is stable under x_{-alpha} for each simple Levi root alpha = (e, e+1):
// (e,j) -> (e+1,j) and (i,e+1) -> (i,e)
inline std::optional<std::pair<Position, Position>> levi_lowering_escape(const Diagram& d, const PositionSet& u) {
    for (int e = 1; e < d.n(); ++e) {
        if (!d.in_levi(e, e + 1)) continue;
        for (auto p : u) {
            if (p.i == e) {
                Position q{e + 1, p.j};
                if (d.in_m(q) && !u.count(q)) return std::pair{p, q};
            }
            if (p.j == e + 1) {
                Position q{p.i, e};
                if (d.in_m(q) && !u.count(q)) return std::pair{p, q};
            }
        }
    }
    return std::nullopt;
}

struct PenetrationRecord {
    int pair = 0;
    int entry = 0;
    std::vector<int> steps;  // lowering indices of the string, up to the one using the pair
    PositionSet E, E_primary, E_secondary;
    bool halted = false;     // the string goes on being lowered after the step using the pair
    int s = 0, s_prime = 0;
    bool starts_inside = false;
    bool penetrates_last = false;  // rows stay <= s before the last step
};

inline PenetrationRecord penetrating_string(const ComponentTableau& ct, int pair_idx) {
    const Diagram& d = ct.diag();
    const auto& pair = d.pairs().at(pair_idx);
    PenetrationRecord rec;
    rec.pair = pair_idx;
    rec.s = pair.height;
    int last = ct.ext.consumed_by.at(pair_idx);
    if (last < 0) throw construction_violation("pair never used");
    rec.entry = ct.ext.lowerings[last].entry;
    for (int u = 0; u <= last; ++u)
        if (ct.ext.lowerings[u].entry == rec.entry) rec.steps.push_back(u);
    for (std::size_t u = last + 1; u < ct.ext.lowerings.size(); ++u)
        rec.halted |= ct.ext.lowerings[u].entry == rec.entry;
    auto gens = ct.generators();
    for (int u : rec.steps) {
        auto ge = generator_exclusions(d, gens[u]);
        rec.E_primary.insert(ge.primary.begin(), ge.primary.end());
        rec.E_secondary.insert(ge.secondary.begin(), ge.secondary.end());
    }
    rec.E = rec.E_primary;
    rec.E.insert(rec.E_secondary.begin(), rec.E_secondary.end());
    int col = d.column_of(rec.entry), row = d.row_of(rec.entry);
    rec.starts_inside = col >= pair.left && col < pair.right && row <= pair.height;
    rec.penetrates_last = true;
    for (int u : rec.steps) {
        row = ct.ext.lowerings[u].stage + 1;
        if (u != last && row > pair.height) rec.penetrates_last = false;
    }
    rec.s_prime = row;
    if (row <= pair.height) rec.penetrates_last = false;
    return rec;
}

struct HattedTableau {
    ShiftedTableau shifted;       // columns of the hatted tableau, C^{m-hat} as the stack
    int m_hat = 0;
    int s_prime = 0;
    std::vector<int> heights, hat_heights;  // slot 0 unused
    bool ledger_ok = true;
    std::string ledger_detail;
    bool stack_increasing = true;
    int true_deg = 0;
    int virtual_inside = 0;   // virtual degree over the columns of the pair only, outside entries suppressed
    int virtual_all = 0;      // same suppression, summed over every column
    PositionSet primary, secondary;  // from the word of the hatted tableau
};

inline HattedTableau hatted_tableau(const ComponentTableau& ct, const PenetrationRecord& rec) {
    const Diagram& d = ct.diag();
    const auto& pair = d.pairs()[rec.pair];
    std::vector<int> stack;
    for (int u : rec.steps) {
        const auto& t = ct.ext.lowerings[u].targets;
        stack.insert(stack.end(), t.begin(), t.end());
    }
    HattedTableau hat;
    hat.shifted = shift_below(d, rec.entry, stack);
    hat.m_hat = static_cast<int>(stack.size());
    hat.s_prime = rec.s_prime;
    hat.stack_increasing = std::is_sorted(stack.begin(), stack.end()) &&
                           std::adjacent_find(stack.begin(), stack.end()) == stack.end();
    hat.heights.assign(d.k() + 1, 0);
    hat.hat_heights.assign(d.k() + 1, 0);
    for (int c = 1; c <= d.k(); ++c) {
        hat.heights[c] = d.height(c);
        hat.hat_heights[c] = static_cast<int>(hat.shifted.columns[c].size());
    }
    std::ostringstream why;
    for (int u : rec.steps) {
        const auto& low = ct.ext.lowerings[u];
        int c = low.from_col + 1;
        if (hat.hat_heights[c] != hat.heights[c] - static_cast<int>(low.targets.size()))
            why << "height of C" << c << " after removal is " << hat.hat_heights[c] << "; ";
    }
    const auto& chain = hat.shifted.chain;
    int h = hat.shifted.home, f = hat.shifted.f;
    if (hat.hat_heights[h] != hat.heights[chain.front()] + hat.m_hat || hat.hat_heights[h] != f + hat.m_hat)
        why << "home column height " << hat.hat_heights[h] << " != f + m-hat; ";
    for (std::size_t k = 1; k < chain.size(); ++k)
        if (hat.hat_heights[chain[k - 1]] != hat.heights[chain[k]]) why << "shifted column C" << chain[k - 1] << " has wrong height; ";
    if (hat.hat_heights[h] != rec.s_prime) why << "home column height " << hat.hat_heights[h] << " != s' = " << rec.s_prime << "; ";
    hat.ledger_detail = why.str();
    hat.ledger_ok = hat.ledger_detail.empty();

    auto kept = [&](int e) { return d.column_of(e) >= pair.left && d.column_of(e) <= pair.right; };
    int s = pair.height;
    for (int c = 1; c <= d.k(); ++c) {
        int count = static_cast<int>(std::count_if(hat.shifted.columns[c].begin(), hat.shifted.columns[c].end(), kept));
        hat.virtual_all += std::min(s, count);
        if (c >= pair.left && c <= pair.right) hat.virtual_inside += std::min(s, count);
    }
    hat.virtual_all -= s;
    hat.virtual_inside -= s;
    hat.true_deg = true_degree(d, pair);

    std::set<int> stacked(stack.begin(), stack.end());
    for (auto p : excluded_from_word(word_form(hat.shifted.columns, d.n()), d))
        (stacked.count(p.j) ? hat.primary : hat.secondary).insert(p);
    return hat;
}

}  // namespace ctab
