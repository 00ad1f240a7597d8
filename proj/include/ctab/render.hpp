#pragma once

#include <iomanip>

#include "roots.hpp"

namespace ctab {

// boxes of T(infinity) filled by a lowering, as (column,row)
inline std::set<std::pair<int, int>> lowered_boxes(const ExtendedTableau& ext) {
    std::set<std::pair<int, int>> out;
    for (const auto& low : ext.lowerings) out.insert({low.from_col + 1, low.stage + 1});
    return out;
}

// rows of a column list, one string per row, cells right aligned
inline std::vector<std::string> grid_rows(const Columns& cols, const std::function<std::string(int, int, int)>& cell) {
    std::size_t rows = 0, width = 1;
    for (std::size_t c = 1; c < cols.size(); ++c) {
        rows = std::max(rows, cols[c].size());
        for (std::size_t r = 0; r < cols[c].size(); ++r)
            width = std::max(width, cell(static_cast<int>(c), static_cast<int>(r) + 1, cols[c][r]).size());
    }
    std::vector<std::string> out;
    for (std::size_t r = 0; r < rows; ++r) {
        std::string line;
        for (std::size_t c = 1; c < cols.size(); ++c) {
            std::string s = r < cols[c].size() ? cell(static_cast<int>(c), static_cast<int>(r) + 1, cols[c][r]) : "";
            line += (c > 1 ? " " : "") + std::string(width - s.size(), ' ') + s;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out.push_back(line);
    }
    return out;
}

enum class Cell { Lower, Levi, Empty, One, Star, Circle };

inline Cell matrix_cell(const ComponentTableau& ct, const PositionSet& X, int i, int j) {
    const Diagram& d = ct.diag();
    if (i > j) return Cell::Lower;
    if (!d.in_m(i, j)) return Cell::Levi;
    Position p{i, j};
    if (ct.v_support.count(p)) return Cell::Star;
    if (ct.e_support.count(p)) return Cell::One;
    if (X.count(p)) return Cell::Circle;
    return Cell::Empty;
}

// 1 = label 1, (*) = circled star, ( ) = circled, . = other root of m, ~ = Levi
inline std::string render_matrix_text(const ComponentTableau& ct, const PositionSet& X) {
    std::ostringstream os;
    int n = ct.diag().n();
    for (int i = 1; i <= n; ++i) {
        std::string line;
        for (int j = 1; j <= n; ++j) {
            const char* s = "   ";
            switch (matrix_cell(ct, X, i, j)) {
                case Cell::Lower: s = "   "; break;
                case Cell::Levi: s = " ~ "; break;
                case Cell::Empty: s = " . "; break;
                case Cell::One: s = " 1 "; break;
                case Cell::Star: s = "(*)"; break;
                case Cell::Circle: s = "( )"; break;
            }
            line += s;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << "\n";
    }
    return os.str();
}

inline std::string render_text(const ComponentTableau& ct, const ExcludedRootSet& ex, int index) {
    const Diagram& d = ct.diag();
    std::ostringstream os;
    os << "tableau " << index << " of (" << d.composition().str() << ")\n";
    os << "choices:";
    if (ct.ext.lowerings.empty()) os << " none";
    for (const auto& low : ct.ext.lowerings)
        os << " [t=" << low.stage << " " << low.entry << " C" << low.from_col << "->C" << low.from_col + 1 << " down " << low.rows_down << "]";
    os << "\nT(inf), lowered entries primed:\n";
    auto low = lowered_boxes(ct.ext);
    for (auto& row : grid_rows(ct.ext.columns, [&](int c, int r, int e) {
             return std::to_string(e) + (low.count({c, r}) ? "'" : "");
         }))
        os << "  " << row << "\n";
    os << "T:\n";
    for (auto& row : grid_rows(d.columns(), [](int, int, int e) { return std::to_string(e); })) os << "  " << row << "\n";
    os << "one: " << str(ct.e_support) << "\n";
    os << "star: " << str(ct.v_support) << "\n";
    os << "excluded: " << str(ex.X) << "\n";
    os << "matrix:\n" << render_matrix_text(ct, ex.X);
    return os.str();
}

inline std::string latex_preamble() {
    return "\\providecommand{\\lowered}[1]{\\textcolor{red}{#1}}\n"
           "\\providecommand{\\cir}[1]{\\textcircled{\\scriptsize #1}}\n"
           "\\newenvironment{componenttableau}[2]{\\par\\noindent\\textbf{Tableau #2 of $(#1)$}\\par}{\\par}\n";
}

// one environment per tableau, one source line per row
inline std::string render_latex(const ComponentTableau& ct, const ExcludedRootSet& ex, int index) {
    const Diagram& d = ct.diag();
    std::ostringstream os;
    os << "\\begin{componenttableau}{" << d.composition().str() << "}{" << index << "}\n";
    auto low = lowered_boxes(ct.ext);
    os << "$\\begin{array}{" << std::string(d.k(), 'c') << "}\n";
    std::size_t rows = 0;
    for (int c = 1; c <= d.k(); ++c) rows = std::max(rows, ct.ext.columns[c].size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (int c = 1; c <= d.k(); ++c) {
            if (c > 1) os << " & ";
            if (r < ct.ext.columns[c].size()) {
                int e = ct.ext.columns[c][r];
                if (low.count({c, static_cast<int>(r) + 1})) os << "\\lowered{" << e << "}";
                else os << e;
            }
        }
        os << " \\\\\n";
    }
    os << "\\end{array}$\n";
    os << "\\[\\begin{pmatrix}\n";
    for (int i = 1; i <= d.n(); ++i) {
        for (int j = 1; j <= d.n(); ++j) {
            if (j > 1) os << " & ";
            switch (matrix_cell(ct, ex.X, i, j)) {
                // Levi blocks drawn as identity blocks, as in the labelled matrices of the figures
                case Cell::Levi: os << (i == j ? "1" : "0"); break;
                case Cell::Lower: os << (d.column_of(i) == d.column_of(j) ? "0" : ""); break;
                case Cell::One: os << "1"; break;
                case Cell::Star: os << "\\cir{$\\ast$}"; break;
                case Cell::Circle: os << "\\cir{ }"; break;
                default: break;
            }
        }
        os << " \\\\\n";
    }
    os << "\\end{pmatrix}\\]\n";
    os << "\\end{componenttableau}\n";
    return os.str();
}

}  // namespace ctab
