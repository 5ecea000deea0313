#pragma once

#include <Eigen/Core>

#include <vector>

namespace stellar {

/// Minimum-total-cost perfect matching for a square cost matrix.
/// Returns col[i], the column assigned to row i. Exhaustive search for
/// n <= exhaustive_limit (ties resolved by the lexicographically smallest
/// permutation), Hungarian method above.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost, int exhaustive_limit = 6);

}  // namespace stellar
