#include "hped/assignment.hpp"

#include <algorithm>
#include <numeric>

namespace hped {

namespace {

// Hungarian method for n <= m, 1-based potentials. Returns col per row.
std::vector<int> hungarian(const std::vector<std::vector<double>>& a, std::size_t n, std::size_t m) {
    const double inf = std::numeric_limits<double>::max() / 4;
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    std::vector<char> used(m + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j]) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
    }
    return row_to_col;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

}  // namespace

std::vector<int> min_cost_max_matching(const std::vector<std::vector<double>>& cost, std::size_t cols) {
    const std::size_t rows = cost.size();
    std::vector<int> result(rows, -1);
    if (rows == 0 || cols == 0) return result;

    // Split into independent components of rows sharing columns.
    std::vector<std::size_t> parent(rows + cols);
    std::iota(parent.begin(), parent.end(), 0);
    double max_cost = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (cost[i][j] == kForbidden) continue;
            max_cost = std::max(max_cost, std::abs(cost[i][j]));
            parent[find_root(parent, i)] = find_root(parent, rows + j);
        }
    }
    const double unmatched = 1e3 * (max_cost + 1.0) * static_cast<double>(rows + 1);
    const double banned = unmatched * 1e3;

    std::vector<std::vector<std::size_t>> comp_rows(rows + cols), comp_cols(rows + cols);
    for (std::size_t i = 0; i < rows; ++i) comp_rows[find_root(parent, i)].push_back(i);
    for (std::size_t j = 0; j < cols; ++j) comp_cols[find_root(parent, rows + j)].push_back(j);

    for (std::size_t c = 0; c < rows + cols; ++c) {
        const auto& rs = comp_rows[c];
        const auto& cs = comp_cols[c];
        if (rs.empty() || cs.empty()) continue;
        const std::size_t n = rs.size();
        const std::size_t m = cs.size() + n;
        std::vector<std::vector<double>> a(n, std::vector<double>(m, unmatched));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < cs.size(); ++j) {
                const double x = cost[rs[i]][cs[j]];
                a[i][j] = x == kForbidden ? banned : x;
            }
        }
        const auto sol = hungarian(a, n, m);
        for (std::size_t i = 0; i < n; ++i) {
            const int j = sol[i];
            if (j >= 0 && static_cast<std::size_t>(j) < cs.size() && cost[rs[i]][cs[j]] != kForbidden) {
                result[rs[i]] = static_cast<int>(cs[j]);
            }
        }
    }
    return result;
}

}  // namespace hped
