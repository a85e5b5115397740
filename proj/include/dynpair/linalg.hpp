#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace dynpair {

/// Reduced row echelon form of an augmented matrix [A | B] where pivots are
/// only chosen inside the leading `a_cols` columns. B may hold any number of
/// right-hand sides, all eliminated in one sweep.
template <class F>
struct RowEchelon {
    std::vector<std::vector<F>> rows;
    std::vector<std::size_t> pivot_cols;  // one entry per pivot row, increasing
    std::size_t a_cols = 0;
};

template <class F>
RowEchelon<F> reduce_rows(std::vector<std::vector<F>> rows, std::size_t a_cols) {
    const F zero{};
    RowEchelon<F> re;
    re.a_cols = a_cols;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < a_cols && pivot_row < rows.size(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < rows.size() && rows[sel][col] == zero)
            ++sel;
        if (sel == rows.size())
            continue;
        std::swap(rows[pivot_row], rows[sel]);
        F pivot = rows[pivot_row][col];
        for (std::size_t c = col; c < rows[pivot_row].size(); ++c)
            rows[pivot_row][c] = rows[pivot_row][c] / pivot;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == pivot_row || rows[r][col] == zero)
                continue;
            F factor = rows[r][col];
            for (std::size_t c = col; c < rows[r].size(); ++c)
                rows[r][c] = rows[r][c] - factor * rows[pivot_row][c];
        }
        re.pivot_cols.push_back(col);
        ++pivot_row;
    }
    re.rows = std::move(rows);
    return re;
}

/// Extract one particular solution per right-hand side from a reduced system,
/// with free variables set to zero. A nullopt entry marks an inconsistent
/// right-hand side.
template <class F>
std::vector<std::optional<std::vector<F>>> particular_solutions(const RowEchelon<F>& re,
                                                                std::size_t n_rhs) {
    const F zero{};
    std::vector<std::optional<std::vector<F>>> out;
    out.reserve(n_rhs);
    std::size_t rank = re.pivot_cols.size();
    for (std::size_t j = 0; j < n_rhs; ++j) {
        std::size_t col = re.a_cols + j;
        bool ok = true;
        for (std::size_t r = rank; r < re.rows.size(); ++r)
            if (!(re.rows[r][col] == zero)) {
                ok = false;
                break;
            }
        if (!ok) {
            out.emplace_back(std::nullopt);
            continue;
        }
        std::vector<F> x(re.a_cols, zero);
        for (std::size_t r = 0; r < rank; ++r)
            x[re.pivot_cols[r]] = re.rows[r][col];
        out.emplace_back(std::move(x));
    }
    return out;
}

}  // namespace dynpair
