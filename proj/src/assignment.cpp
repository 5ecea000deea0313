#include "stellar/assignment.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "stellar/errors.hpp"

namespace stellar {

namespace {

std::vector<int> exhaustive(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (int i = 0; i < n; ++i) c += cost(i, perm[i]);
        if (c < best_cost) {
            best_cost = c;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Shortest augmenting path with row/column potentials, O(n^3).
std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
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
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> col(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) col[p[j] - 1] = j - 1;
    return col;
}

}  // namespace

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost, int exhaustive_limit) {
    if (cost.rows() != cost.cols()) throw DomainError("min_cost_assignment: cost matrix is not square");
    if (!cost.allFinite()) throw DomainError("min_cost_assignment: non-finite cost");
    if (cost.rows() == 0) return {};
    if (cost.rows() <= exhaustive_limit) return exhaustive(cost);
    return hungarian(cost);
}

}  // namespace stellar
