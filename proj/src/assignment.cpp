/*
 * assignment.cpp
 *
 * This source file is part of the hrcguard open source project
 *
 * Copyright 2026 The hrcguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "assignment.hpp"

#include <limits>

namespace hrcguard {

namespace {

// Rows <= cols. Potentials u (rows) and v (cols), 1-based with a virtual
// column 0 holding the row currently being inserted.
std::vector<int> solve_wide(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const int m = static_cast<int>(cost.cols());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> owner(m + 1, 0), way(m + 1, 0);

    for (int row = 1; row <= n; ++row) {
        owner[0] = row;
        int col0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<bool> used(m + 1, false);
        do {
            used[col0] = true;
            const int row0 = owner[col0];
            double delta = inf;
            int col1 = 0;
            for (int col = 1; col <= m; ++col) {
                if (used[col]) continue;
                const double reduced = cost(row0 - 1, col - 1) - u[row0] - v[col];
                if (reduced < minv[col]) {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if (minv[col] < delta) {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for (int col = 0; col <= m; ++col) {
                if (used[col]) {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
        } while (owner[col0] != 0);
        do {
            const int col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
        } while (col0 != 0);
    }

    std::vector<int> result(n, -1);
    for (int col = 1; col <= m; ++col) {
        if (owner[col] != 0) result[owner[col] - 1] = col - 1;
    }
    return result;
}

}  // namespace

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    if (cost.rows() == 0 || cost.cols() == 0) {
        return std::vector<int>(static_cast<size_t>(cost.rows()), -1);
    }
    if (cost.rows() <= cost.cols()) return solve_wide(cost);

    const std::vector<int> by_col = solve_wide(cost.transpose());
    std::vector<int> result(static_cast<size_t>(cost.rows()), -1);
    for (size_t col = 0; col < by_col.size(); ++col) {
        if (by_col[col] >= 0) result[static_cast<size_t>(by_col[col])] = static_cast<int>(col);
    }
    return result;
}

}  // namespace hrcguard
