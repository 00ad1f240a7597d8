#pragma once

#include <map>
#include <memory>

#include "core.hpp"

namespace ctab {

// one application of the lowering rule: entry goes from column from_col, row from_row,
// to row stage+1 of column from_col+1, consuming the pairs of heights from_row..stage
struct Lowering {
    int stage = 0;
    int from_col = 0;
    int entry = 0;
    int from_row = 0;
    int rows_down = 0;
    std::vector<int> pairs;    // pair indices, ascending height
    std::vector<int> targets;  // entries of C_{from_col+1} joined to entry by starred lines

    auto operator<=>(const Lowering&) const = default;
};

struct ExtendedTableau {
    std::shared_ptr<const Diagram> diagram;
    std::vector<std::vector<int>> columns;  // slot 0 unused; columns[c][row-1]
    std::vector<Lowering> lowerings;        // in the order applied
    std::vector<int> consumed_by;           // per pair: index into lowerings
    int stage = 0;

    int length(int c) const { return static_cast<int>(columns[c].size()); }
    bool contains(int c, int e) const {
        return std::find(columns[c].begin(), columns[c].end(), e) != columns[c].end();
    }
    int row_in(int c, int e) const {
        auto it = std::find(columns[c].begin(), columns[c].end(), e);
        return it == columns[c].end() ? 0 : static_cast<int>(it - columns[c].begin()) + 1;
    }
};

struct Batch {
    int height = 0;
    int pair = 0;
    std::vector<int> members;
};

enum class Label { One, Star, Neutral };

inline const char* label_name(Label l) {
    switch (l) {
        case Label::One: return "one";
        case Label::Star: return "star";
        default: return "neutral";
    }
}

struct DecoratedLine {
    int i = 0, j = 0;
    Label label = Label::Neutral;
    int from_col = 0, from_row = 0, to_col = 0, to_row = 0;
};

struct Generator {
    int entry = 0;
    std::vector<int> targets;
    int lowering = 0;  // index into the tableau's lowerings
};

struct ComponentTableau {
    std::shared_ptr<const Diagram> diagram;
    ExtendedTableau ext;
    std::vector<DecoratedLine> lines;  // One and Star only, i<j
    PositionSet e_support;             // One
    PositionSet v_support;             // Star

    const Diagram& diag() const { return *diagram; }
    std::vector<Generator> generators() const {
        std::vector<Generator> g;
        for (std::size_t u = 0; u < ext.lowerings.size(); ++u)
            g.push_back({ext.lowerings[u].entry, ext.lowerings[u].targets, static_cast<int>(u)});
        return g;
    }
};

namespace detail {

inline std::vector<int> star_targets(const Diagram& d, int target_col, int from_row, int stage) {
    std::vector<int> out;
    if (d.height(target_col) == stage) {
        for (int row = from_row; row <= stage; ++row) out.push_back(d.entry(target_col, row));
    } else {
        out.push_back(d.last_entry(target_col));
    }
    return out;
}

// lowering options into column r+1 at stage t
inline std::vector<Lowering> lowering_options(const ExtendedTableau& ext, int r, int t) {
    const Diagram& d = *ext.diagram;
    std::vector<Lowering> out;
    if (ext.length(r + 1) != t) return out;
    int upto = std::min(t, ext.length(r));
    for (int p = 1; p <= upto; ++p) {
        int e = ext.columns[r][p - 1];
        if (ext.contains(r + 1, e)) continue;
        if (p < t && d.height(r + 1) != t) continue;
        Lowering low{t, r, e, p, t - p + 1, {}, {}};
        bool ok = true;
        for (int s = p; s <= t && ok; ++s) {
            auto q = d.surrounding(r, s);
            if (!q || ext.consumed_by[*q] >= 0) ok = false;
            else low.pairs.push_back(*q);
        }
        if (!ok) continue;
        low.targets = star_targets(d, r + 1, p, t);
        out.push_back(std::move(low));
    }
    return out;
}

// same options, generated from batch membership instead of a direct scan
inline std::vector<Lowering> lowering_options_from_batches(const ExtendedTableau& ext, int r, int t);

inline void apply_lowering(ExtendedTableau& ext, const Lowering& low) {
    int idx = static_cast<int>(ext.lowerings.size());
    ext.columns[low.from_col + 1].push_back(low.entry);
    for (int q : low.pairs) ext.consumed_by[q] = idx;
    ext.lowerings.push_back(low);
}

inline bool horizontal_moves(ExtendedTableau& ext, int t) {
    bool moved = false;
    for (int r = 1; r < ext.diagram->k(); ++r) {
        if (ext.length(r + 1) == t && ext.length(r) >= t + 1) {
            ext.columns[r + 1].push_back(ext.columns[r][t]);
            moved = true;
        }
    }
    return moved;
}

// a free pair can still be used later only by a multi-row drop into a column strictly inside it
inline bool still_feasible(const ExtendedTableau& ext, int t) {
    const Diagram& d = *ext.diagram;
    for (std::size_t q = 0; q < d.pairs().size(); ++q) {
        if (ext.consumed_by[q] >= 0) continue;
        const auto& p = d.pairs()[q];
        if (p.height > t) continue;
        bool room = false;
        for (int c = p.left + 1; c < p.right && !room; ++c) room = d.height(c) > t;
        if (!room) return false;
    }
    return true;
}

template <class Options>
void enumerate_stage(ExtendedTableau ext, int t, std::vector<ExtendedTableau>& out, Options&& options) {
    const Diagram& d = *ext.diagram;
    std::vector<std::vector<Lowering>> per_gap(d.k() + 1);
    for (int r = 1; r < d.k(); ++r) per_gap[r] = options(ext, r, t);

    std::vector<const Lowering*> chosen;
    std::vector<char> taken(d.pairs().size(), 0);

    auto finish = [&]() {
        ExtendedTableau next = ext;
        for (auto* low : chosen) apply_lowering(next, *low);
        bool moved = horizontal_moves(next, t);
        next.stage = t;
        bool inserted = moved || !chosen.empty();
        if (t >= d.max_height() && !inserted) {
            for (int c : next.consumed_by)
                if (c < 0) return;
            out.push_back(std::move(next));
            return;
        }
        if (!still_feasible(next, t)) return;
        enumerate_stage(std::move(next), t + 1, out, options);
    };

    auto choose = [&](auto&& self, int r) -> void {
        if (r >= d.k()) {
            finish();
            return;
        }
        for (const auto& low : per_gap[r]) {
            bool clash = false;
            for (int q : low.pairs) clash |= taken[q] != 0;
            if (clash) continue;
            for (int q : low.pairs) taken[q] = 1;
            chosen.push_back(&low);
            self(self, r + 1);
            chosen.pop_back();
            for (int q : low.pairs) taken[q] = 0;
        }
        self(self, r + 1);
    };
    choose(choose, 1);
}

inline ExtendedTableau initial(std::shared_ptr<const Diagram> d) {
    ExtendedTableau ext;
    ext.columns = d->columns();
    ext.consumed_by.assign(d->pairs().size(), -1);
    ext.diagram = std::move(d);
    return ext;
}

}  // namespace detail

// rightmost occurrences, in rows <= s, of the values met in columns [left, right[
inline Batch batch(const ExtendedTableau& ext, int pair_idx) {
    const auto& p = ext.diagram->pairs().at(pair_idx);
    std::map<int, std::pair<int, int>> rightmost;  // value -> (col,row)
    for (int c = p.left; c < p.right; ++c)
        for (int row = 1; row <= std::min(p.height, ext.length(c)); ++row) rightmost[ext.columns[c][row - 1]] = {c, row};
    Batch b{p.height, pair_idx, {}};
    for (auto& entry : rightmost) b.members.push_back(entry.first);
    return b;
}

namespace detail {

inline std::vector<Lowering> lowering_options_from_batches(const ExtendedTableau& ext, int r, int t) {
    const Diagram& d = *ext.diagram;
    std::vector<Lowering> out;
    if (ext.length(r + 1) != t) return out;
    auto top = d.surrounding(r, t);
    if (!top || ext.consumed_by[*top] >= 0) return out;
    Batch b = batch(ext, *top);
    std::vector<std::pair<int, int>> found;  // (row, entry)
    for (int e : b.members) {
        int row = ext.row_in(r, e);
        if (row == 0 || row > t || ext.contains(r + 1, e)) continue;
        found.push_back({row, e});
    }
    std::sort(found.begin(), found.end());
    for (auto [p, e] : found) {
        if (p < t && d.height(r + 1) != t) continue;
        Lowering low{t, r, e, p, t - p + 1, {}, {}};
        bool ok = true;
        for (int s = p; s <= t && ok; ++s) {
            auto q = d.surrounding(r, s);
            if (!q || ext.consumed_by[*q] >= 0) {
                ok = false;
                continue;
            }
            auto members = batch(ext, *q).members;
            if (std::find(members.begin(), members.end(), e) == members.end()) ok = false;
            low.pairs.push_back(*q);
        }
        if (!ok) continue;
        low.targets = star_targets(d, r + 1, p, t);
        out.push_back(std::move(low));
    }
    return out;
}

}  // namespace detail

inline std::vector<ExtendedTableau> extend_all(std::shared_ptr<const Diagram> d, bool lazy_batches = false) {
    std::vector<ExtendedTableau> out;
    auto start = detail::initial(std::move(d));
    if (lazy_batches)
        detail::enumerate_stage(start, 1, out, detail::lowering_options_from_batches);
    else
        detail::enumerate_stage(start, 1, out, detail::lowering_options);
    if (out.empty()) throw construction_violation("no complete choice sequence for " + start.diagram->composition().str());
    return out;
}

inline std::vector<ExtendedTableau> extend_all(const Diagram& d, bool lazy_batches = false) {
    return extend_all(std::make_shared<const Diagram>(d), lazy_batches);
}

inline std::vector<DecoratedLine> decorate(const ExtendedTableau& ext) {
    const Diagram& d = *ext.diagram;
    std::vector<DecoratedLine> lines;
    for (int r = 1; r < d.k(); ++r) {
        const auto& left = ext.columns[r];
        const auto& target = d.column(r + 1);
        std::size_t next_free = 0;
        for (int row = 1; row <= ext.length(r); ++row) {
            int e = left[row - 1];
            int there = ext.row_in(r + 1, e);
            if (there) {
                lines.push_back({e, e, Label::Neutral, r, row, r + 1, there});
                continue;
            }
            if (next_free < target.size()) {
                int j = target[next_free++];
                lines.push_back({e, j, Label::One, r, row, r + 1, d.row_of(j)});
            }
        }
        for (const auto& low : ext.lowerings) {
            if (low.from_col != r) continue;
            int at = ext.row_in(r + 1, low.entry);
            for (int j : low.targets) lines.push_back({low.entry, j, Label::Star, r + 1, at, r + 1, d.row_of(j)});
        }
    }
    return lines;
}

inline ComponentTableau collapse(const ExtendedTableau& ext, const std::vector<DecoratedLine>& lines) {
    ComponentTableau ct;
    ct.diagram = ext.diagram;
    ct.ext = ext;
    for (const auto& l : lines) {
        if (l.label == Label::Neutral) continue;
        if (!ext.diagram->in_m(l.i, l.j))
            throw construction_violation("labelled line outside the nilradical: " + str(Position{l.i, l.j}));
        DecoratedLine c = l;
        c.from_col = ext.diagram->column_of(l.i);
        c.from_row = ext.diagram->row_of(l.i);
        c.to_col = ext.diagram->column_of(l.j);
        c.to_row = ext.diagram->row_of(l.j);
        auto& set = l.label == Label::One ? ct.e_support : ct.v_support;
        if (!set.insert({l.i, l.j}).second) throw construction_violation("repeated labelled line " + str(Position{l.i, l.j}));
        ct.lines.push_back(c);
    }
    for (auto p : ct.e_support)
        if (ct.v_support.count(p)) throw construction_violation("line labelled both 1 and star " + str(p));
    std::sort(ct.lines.begin(), ct.lines.end(), [](auto& a, auto& b) {
        return std::tie(a.i, a.j, a.label) < std::tie(b.i, b.j, b.label);
    });
    return ct;
}

inline std::vector<ComponentTableau> component_tableaux(std::shared_ptr<const Diagram> d) {
    std::vector<ComponentTableau> out;
    for (auto& ext : extend_all(std::move(d))) out.push_back(collapse(ext, decorate(ext)));
    return out;
}

inline std::vector<ComponentTableau> component_tableaux(const Diagram& d) {
    return component_tableaux(std::make_shared<const Diagram>(d));
}

// boxes (column,row) of each entry in T(infinity), left to right
inline std::map<int, std::vector<std::pair<int, int>>> strings(const ExtendedTableau& ext) {
    std::map<int, std::vector<std::pair<int, int>>> out;
    for (int c = 1; c <= ext.diagram->k(); ++c)
        for (int row = 1; row <= ext.length(c); ++row) out[ext.columns[c][row - 1]].push_back({c, row});
    return out;
}

struct ChoiceStep {
    int t, pair_left, pair_right, entry, rows_down;
};

inline std::vector<ChoiceStep> numerical_data(const ExtendedTableau& ext) {
    std::vector<ChoiceStep> out;
    for (const auto& low : ext.lowerings)
        for (int q : low.pairs) {
            const auto& p = ext.diagram->pairs()[q];
            out.push_back({low.stage, p.left, p.right, low.entry, low.rows_down});
        }
    return out;
}

inline nlohmann::ordered_json to_json(const ComponentTableau& ct) {
    nlohmann::ordered_json j;
    j["composition"] = ct.diag().composition().parts;
    auto seq = nlohmann::ordered_json::array();
    for (auto& s : numerical_data(ct.ext))
        seq.push_back({{"t", s.t}, {"pairLeft", s.pair_left}, {"pairRight", s.pair_right}, {"entry", s.entry}, {"rowsDown", s.rows_down}});
    j["choiceSequence"] = seq;
    auto lines = nlohmann::ordered_json::array();
    for (auto& l : ct.lines) lines.push_back({{"i", l.i}, {"j", l.j}, {"label", label_name(l.label)}});
    j["lines"] = lines;
    return j;
}

struct StringReport {
    bool non_crossing = true;
    bool starting_places = true;
    bool one_ends_distinct = true;
    std::string detail;
    bool ok() const { return non_crossing && starting_places && one_ends_distinct; }
};

inline StringReport string_checks(const ExtendedTableau& ext) {
    StringReport rep;
    const Diagram& d = *ext.diagram;
    std::ostringstream why;
    auto paths = strings(ext);
    for (auto a = paths.begin(); a != paths.end(); ++a)
        for (auto b = std::next(a); b != paths.end(); ++b) {
            int order = 0;
            for (auto [ca, ra] : a->second)
                for (auto [cb, rb] : b->second) {
                    if (ca != cb) continue;
                    int o = ra < rb ? -1 : 1;
                    if (order && o != order) {
                        rep.non_crossing = false;
                        why << "strings of " << a->first << " and " << b->first << " cross; ";
                    }
                    order = o;
                    int upper = o < 0 ? a->first : b->first, lower = o < 0 ? b->first : a->first;
                    if (d.column_of(lower) > d.column_of(upper)) {
                        rep.starting_places = false;
                        why << lower << " runs below " << upper << " but starts to its right; ";
                    }
                }
        }
    for (int r = 1; r < d.k(); ++r) {
        std::set<int> starts, ends;
        for (const auto& l : decorate(ext)) {
            if (l.label != Label::One || l.from_col != r) continue;
            if (!starts.insert(l.i).second || !ends.insert(l.j).second) {
                rep.one_ends_distinct = false;
                why << "repeated end of a 1 line between C" << r << " and C" << r + 1 << "; ";
            }
        }
    }
    rep.detail = why.str();
    return rep;
}

inline bool distinct_numerical_data(const std::vector<ComponentTableau>& cts) {
    std::set<std::vector<Lowering>> seen;
    std::set<std::pair<PositionSet, PositionSet>> labels;
    for (const auto& ct : cts) {
        if (!seen.insert(ct.ext.lowerings).second) return false;
        if (!labels.insert({ct.e_support, ct.v_support}).second) return false;
    }
    return true;
}

}  // namespace ctab
