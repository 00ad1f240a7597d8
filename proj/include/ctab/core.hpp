#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ctab {

struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
// a builder/roots invariant that should be impossible was hit
struct construction_violation : std::logic_error {
    using std::logic_error::logic_error;
};
struct internal_consistency : std::logic_error {
    using std::logic_error::logic_error;
};

struct Composition {
    std::vector<int> parts;

    int n() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    int k() const { return static_cast<int>(parts.size()); }

    static Composition parse(std::string_view text) {
        Composition c;
        std::string token;
        auto flush = [&] {
            if (token.empty()) throw invalid_input("empty part in composition");
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(token, &used);
            } catch (const std::exception&) {
                throw invalid_input("bad part '" + token + "'");
            }
            if (used != token.size() || v < 1) throw invalid_input("bad part '" + token + "'");
            c.parts.push_back(v);
            token.clear();
        };
        for (char ch : text) {
            if (ch == ' ') continue;
            if (ch == ',') flush();
            else token.push_back(ch);
        }
        flush();
        return c;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(parts[i]);
        }
        return s;
    }

    bool is_partition() const { return std::is_sorted(parts.rbegin(), parts.rend()); }

    auto operator<=>(const Composition&) const = default;
};

// (i,j) with i<j, entries 1..n
struct Position {
    int i = 0, j = 0;
    auto operator<=>(const Position&) const = default;
};

using PositionSet = std::set<Position>;

struct NeighbouringPair {
    int left = 0, right = 0, height = 0;
    auto operator<=>(const NeighbouringPair&) const = default;
};

// Columns, rows and entries are 1-based. Vectors indexed by column or entry carry an unused slot 0.
class Diagram {
public:
    explicit Diagram(Composition comp) : comp_(std::move(comp)) {
        if (comp_.parts.empty()) throw invalid_input("empty composition");
        for (int p : comp_.parts)
            if (p < 1) throw invalid_input("parts must be positive");
        n_ = comp_.n();
        k_ = comp_.k();
        cols_.assign(k_ + 1, {});
        col_of_.assign(n_ + 1, 0);
        row_of_.assign(n_ + 1, 0);
        int e = 1;
        for (int c = 1; c <= k_; ++c)
            for (int r = 1; r <= comp_.parts[c - 1]; ++r, ++e) {
                cols_[c].push_back(e);
                col_of_[e] = c;
                row_of_[e] = r;
            }
        for (int s = 1; s <= max_height(); ++s) {
            int last = 0;
            for (int c = 1; c <= k_; ++c) {
                if (height(c) != s) continue;
                if (last) pairs_.push_back({last, c, s});
                last = c;
            }
        }
        std::sort(pairs_.begin(), pairs_.end(), [](auto& a, auto& b) {
            return std::tie(a.height, a.left) < std::tie(b.height, b.left);
        });
        for (const auto& p : pairs_) {
            std::vector<int> boxes;
            for (int c = p.left; c <= p.right; ++c)
                for (int e2 : cols_[c])
                    if (row_of_[e2] <= p.height) boxes.push_back(e2);
            rects_.push_back(std::move(boxes));
        }
    }

    explicit Diagram(std::vector<int> parts) : Diagram(Composition{std::move(parts)}) {}

    const Composition& composition() const { return comp_; }
    int n() const { return n_; }
    int k() const { return k_; }
    int height(int c) const { return comp_.parts.at(c - 1); }
    int max_height() const { return *std::max_element(comp_.parts.begin(), comp_.parts.end()); }
    const std::vector<int>& column(int c) const { return cols_.at(c); }
    const std::vector<std::vector<int>>& columns() const { return cols_; }
    int entry(int c, int row) const { return cols_.at(c).at(row - 1); }
    int column_of(int i) const { return col_of_.at(i); }
    int row_of(int i) const { return row_of_.at(i); }
    int first_entry(int c) const { return cols_.at(c).front(); }
    int last_entry(int c) const { return cols_.at(c).back(); }

    bool in_m(int i, int j) const { return i < j && col_of_[i] < col_of_[j]; }
    bool in_m(Position p) const { return in_m(p.i, p.j); }
    bool in_levi(int i, int j) const { return col_of_[i] == col_of_[j]; }

    std::vector<Position> m_positions() const {
        std::vector<Position> out;
        for (int i = 1; i <= n_; ++i)
            for (int j = i + 1; j <= n_; ++j)
                if (in_m(i, j)) out.push_back({i, j});
        return out;
    }

    int dim_m() const {
        long s = 0;
        for (int a = 0; a < k_; ++a)
            for (int b = a + 1; b < k_; ++b) s += long(comp_.parts[a]) * comp_.parts[b];
        return static_cast<int>(s);
    }

    const std::vector<NeighbouringPair>& pairs() const { return pairs_; }
    int generator_count() const { return static_cast<int>(pairs_.size()); }

    int pair_index(const NeighbouringPair& p) const {
        auto it = std::find(pairs_.begin(), pairs_.end(), p);
        if (it == pairs_.end()) throw invalid_input("not a neighbouring pair");
        return static_cast<int>(it - pairs_.begin());
    }

    // the pair of height s with left <= r < right, i.e. surrounding the gap between C_r and C_{r+1}
    std::optional<int> surrounding(int r, int s) const {
        for (std::size_t q = 0; q < pairs_.size(); ++q)
            if (pairs_[q].height == s && pairs_[q].left <= r && pairs_[q].right >= r + 1)
                return static_cast<int>(q);
        return std::nullopt;
    }

    // boxes of the rectangle of rows <= s spanning [left, right]
    const std::vector<int>& rectangle(int pair_idx) const { return rects_.at(pair_idx); }

private:
    Composition comp_;
    int n_ = 0, k_ = 0;
    std::vector<std::vector<int>> cols_;
    std::vector<int> col_of_, row_of_;
    std::vector<NeighbouringPair> pairs_;
    std::vector<std::vector<int>> rects_;
};

inline int d_D(const Diagram& d, const NeighbouringPair& p) {
    int total = 0;
    for (int c = p.left; c <= p.right; ++c) total += std::max(d.height(c) - p.height, 0);
    return total;
}

inline int true_degree(const Diagram& d, const NeighbouringPair& p) {
    int total = 0;
    for (int c = p.left; c <= p.right; ++c) total += std::min(p.height, d.height(c));
    return total - p.height;
}

inline int boxes_between(const Diagram& d, const NeighbouringPair& p) {
    int total = 0;
    for (int c = p.left; c <= p.right; ++c) total += d.height(c);
    return total;
}

// all 2^{n-1} compositions of n, in lexicographic order of parts
inline std::vector<Composition> compositions_of(int n) {
    std::vector<Composition> out;
    if (n < 1) return out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int left) -> void {
        if (left == 0) {
            out.push_back({cur});
            return;
        }
        for (int p = 1; p <= left; ++p) {
            cur.push_back(p);
            self(self, left - p);
            cur.pop_back();
        }
    };
    rec(rec, n);
    return out;
}

inline nlohmann::ordered_json to_json(const Diagram& d) {
    nlohmann::ordered_json j;
    j["parts"] = d.composition().parts;
    j["n"] = d.n();
    auto cols = nlohmann::ordered_json::array();
    for (int c = 1; c <= d.k(); ++c) cols.push_back(d.column(c));
    j["columns"] = cols;
    return j;
}

inline nlohmann::ordered_json to_json(const NeighbouringPair& p) {
    return {{"left", p.left}, {"right", p.right}, {"height", p.height}};
}

inline nlohmann::ordered_json to_json(const PositionSet& s) {
    auto arr = nlohmann::ordered_json::array();
    for (auto p : s) arr.push_back({p.i, p.j});
    return arr;
}

inline std::string str(Position p) {
    return "(" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
}

inline std::string str(const PositionSet& s) {
    std::string out = "{";
    bool first = true;
    for (auto p : s) {
        if (!first) out += ",";
        first = false;
        out += str(p);
    }
    return out + "}";
}

}  // namespace ctab
