#include "stellar/composition.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "stellar/errors.hpp"

namespace stellar {

SeededRng SeededRng::from_entropy() {
    std::random_device rd;
    const std::uint64_t hi = rd();
    return SeededRng((hi << 32) ^ rd());
}

double SeededRng::normal() {
    // 1 - u keeps the logarithm finite.
    const double u = 1.0 - uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
}

SymmetricState compose(const SymmetricState& a, const SymmetricState& b) {
    const VectorXcd pa = a.majorana_coefficients();
    const VectorXcd pb = b.majorana_coefficients();
    VectorXcd c = VectorXcd::Zero(pa.size() + pb.size() - 1);
    for (Eigen::Index i = 0; i < pa.size(); ++i)
        for (Eigen::Index j = 0; j < pb.size(); ++j) c[i + j] += pa[i] * pb[j];
    return SymmetricState::from_majorana_coefficients(c);
}

QubitState random_qubit(SeededRng& rng) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    return {std::acos(z), phi};
}

SymmetricState random_state(int n, SeededRng& rng) {
    if (n < 1) throw DomainError("random_state: n must be positive");
    std::vector<Vector2cd> parts;
    parts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parts.push_back(random_qubit(rng).amplitudes());
    return SymmetricState::from_majorana_coefficients(product_coefficients(parts));
}

SymmetricState random_antipodal_state(int n, SeededRng& rng) {
    if (n < 2 || n % 2 != 0)
        throw DomainError("random_antipodal_state: n = " + std::to_string(n) + " must be even and positive");
    std::vector<Vector2cd> parts;
    parts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n / 2; ++i) {
        const QubitState q = random_qubit(rng);
        parts.push_back(q.amplitudes());
        parts.push_back(q.antipode().amplitudes());
    }
    return SymmetricState::from_majorana_coefficients(product_coefficients(parts));
}

}  // namespace stellar
