#pragma once

#include <Eigen/Core>

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "stellar/errors.hpp"

namespace stellar {

/// Binomial coefficient C(n, k) as a double. Every partial product is itself a
/// binomial coefficient, so the result is exact while it fits in 53 bits.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline constexpr int kMaxPermanentOrder = 20;

/// Permanent of a square matrix by Ryser's inclusion-exclusion formula,
/// visiting column subsets in Gray-code order so each step is O(n).
template <typename Derived>
typename Derived::Scalar permanent(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw DomainError("permanent: matrix is not square");
    if (n == 0) return Scalar(1);
    if (n > kMaxPermanentOrder)
        throw ResourceError("permanent: order " + std::to_string(n) + " exceeds limit " +
                            std::to_string(kMaxPermanentOrder));

    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row_sums =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
    std::vector<bool> in_subset(static_cast<std::size_t>(n), false);
    Scalar total(0);
    int subset_size = 0;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const int j = std::countr_zero(k);
        if (in_subset[j]) {
            row_sums -= a.col(j);
            --subset_size;
        } else {
            row_sums += a.col(j);
            ++subset_size;
        }
        in_subset[j] = !in_subset[j];
        const Scalar prod = row_sums.prod();
        if (subset_size % 2 == 0)
            total += prod;
        else
            total -= prod;
    }
    return (n % 2 == 0) ? total : Scalar(-total);
}

/// Elementary symmetric polynomials e_0..e_m of the given values (e_0 = 1).
template <typename Scalar>
std::vector<Scalar> elementary_symmetric(std::span<const Scalar> values) {
    std::vector<Scalar> e(values.size() + 1, Scalar(0));
    e[0] = Scalar(1);
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t k = i + 1; k > 0; --k) e[k] += values[i] * e[k - 1];
    return e;
}

}  // namespace stellar
