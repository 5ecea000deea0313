#include "stellar/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "stellar/errors.hpp"
#include "stellar/numeric.hpp"

namespace stellar {

namespace {

constexpr double kPhaseThreshold = 1e-10;
constexpr int kMaxFullQubits = 24;

double wrap_phi(double phi) {
    double p = std::fmod(phi, 2.0 * kPi);
    if (p < 0) p += 2.0 * kPi;
    if (p >= 2.0 * kPi) p = 0.0;
    return p;
}

void check_full_size(int n, const char* op) {
    if (n < 1) throw DomainError(std::string(op) + ": qubit count must be positive");
    if (n > kMaxFullQubits)
        throw ResourceError(std::string(op) + ": " + std::to_string(n) +
                            " qubits exceeds the dense limit of " + std::to_string(kMaxFullQubits));
}

}  // namespace

QubitState::QubitState(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw DomainError("QubitState: non-finite angle");
    // Reflect theta into [0, pi], moving phi to the other side when needed.
    double t = std::fmod(theta, 2.0 * kPi);
    if (t < 0) t += 2.0 * kPi;
    if (t > kPi) {
        t = 2.0 * kPi - t;
        phi += kPi;
    }
    theta_ = t;
    phi_ = (t == 0.0 || t == kPi) ? 0.0 : wrap_phi(phi);
}

QubitState QubitState::from_amplitudes(const Vector2cd& amplitudes) {
    const double a = std::abs(amplitudes[0]);
    const double b = std::abs(amplitudes[1]);
    if (a == 0.0 && b == 0.0) throw DomainError("QubitState: zero vector");
    const double theta = 2.0 * std::atan2(b, a);
    if (a == 0.0 || b == 0.0) return {theta, 0.0};
    return {theta, std::arg(amplitudes[1]) - std::arg(amplitudes[0])};
}

QubitState QubitState::from_bloch(const Vector3d& v) {
    const double r = v.norm();
    if (r == 0.0) throw DomainError("QubitState: zero Bloch vector");
    const double z = std::clamp(v.z() / r, -1.0, 1.0);
    const double rho = std::hypot(v.x(), v.y()) / r;
    return {std::atan2(rho, z), std::atan2(v.y(), v.x())};
}

Vector2cd QubitState::amplitudes() const {
    return {Complex(std::cos(theta_ / 2.0), 0.0), std::polar(std::sin(theta_ / 2.0), phi_)};
}

Vector3d QubitState::bloch() const {
    return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_), std::cos(theta_)};
}

QubitState QubitState::antipode() const { return {kPi - theta_, phi_ + kPi}; }

BasisLabel BasisLabel::from_nk(int n, int k) {
    if (n < 1 || k < 0 || k > n) throw DomainError("BasisLabel: need 0 <= k <= n, n >= 1");
    return {n, k};
}

BasisLabel BasisLabel::from_jm(int twice_j, int twice_m) {
    if (twice_j < 1 || std::abs(twice_m) > twice_j || (twice_j - twice_m) % 2 != 0)
        throw DomainError("BasisLabel: need |m| <= j with j - m integral");
    return {twice_j, (twice_j - twice_m) / 2};
}

SymmetricState::SymmetricState(VectorXcd dicke) : d_(std::move(dicke)) {
    if (d_.size() < 2) throw DomainError("SymmetricState: need n >= 1 (at least two coefficients)");
    if (!d_.allFinite()) throw DomainError("SymmetricState: non-finite coefficient");
    const double norm = d_.norm();
    if (norm == 0.0) throw DomainError("SymmetricState: zero state");
    d_ /= norm;
    for (Eigen::Index k = 0; k < d_.size(); ++k) {
        const double mag = std::abs(d_[k]);
        if (mag > kPhaseThreshold) {
            d_ *= std::conj(d_[k]) / mag;
            d_[k] = Complex(d_[k].real(), 0.0);
            break;
        }
    }
}

VectorXcd SymmetricState::majorana_coefficients() const {
    const int n = this->n();
    VectorXcd a(n + 1);
    for (int k = 0; k <= n; ++k) a[k] = d_[k] * std::sqrt(binomial(n, k));
    return a;
}

SymmetricState SymmetricState::from_majorana_coefficients(const VectorXcd& a) {
    const int n = static_cast<int>(a.size()) - 1;
    VectorXcd d(a.size());
    for (int k = 0; k <= n; ++k) d[k] = a[k] / std::sqrt(binomial(n, k));
    return SymmetricState(std::move(d));
}

FullState::FullState(int n, VectorXcd amplitudes) : n_(n), amps_(std::move(amplitudes)) {
    check_full_size(n, "FullState");
    if (amps_.size() != (Eigen::Index{1} << n))
        throw DomainError("FullState: amplitude count is not 2^n");
    const double norm = amps_.norm();
    if (norm == 0.0) throw DomainError("FullState: zero state");
    amps_ /= norm;
}

double fidelity(const SymmetricState& a, const SymmetricState& b) {
    if (a.n() != b.n()) return 0.0;
    return std::abs(a.dicke().dot(b.dicke()));
}

SymmetricState dicke_state(int n, int k) {
    if (n < 1) throw DomainError("dicke_state: n must be positive");
    if (k < 0 || k > n)
        throw DomainError("dicke_state: k = " + std::to_string(k) + " outside [0, " +
                          std::to_string(n) + "]");
    VectorXcd d = VectorXcd::Zero(n + 1);
    d[k] = 1.0;
    return SymmetricState(std::move(d));
}

SymmetricState coherent_state(int n, const QubitState& center) {
    if (n < 1) throw DomainError("coherent_state: n must be positive");
    const double c = std::cos(center.theta() / 2.0);
    const double s = std::sin(center.theta() / 2.0);
    VectorXcd d(n + 1);
    for (int k = 0; k <= n; ++k)
        d[k] = std::sqrt(binomial(n, k)) * std::pow(c, n - k) * std::pow(s, k) *
               std::polar(1.0, k * center.phi());
    return SymmetricState(std::move(d));
}

VectorXcd product_coefficients(std::span<const Vector2cd> parts) {
    // Accumulated in extended precision so the result carries one rounding,
    // not one per factor; star positions are sensitive to it for large n.
    using L = std::complex<long double>;
    const int n = static_cast<int>(parts.size());
    std::vector<L> acc(static_cast<std::size_t>(n + 1), L(0));
    acc[0] = 1.0L;
    for (int i = 0; i < n; ++i) {
        const L u(parts[i][0]), v(parts[i][1]);
        for (int k = i + 1; k > 0; --k) acc[k] = acc[k] * u + acc[k - 1] * v;
        acc[0] *= u;
    }
    VectorXcd a(n + 1);
    for (int k = 0; k <= n; ++k) a[k] = Complex(acc[k]);
    return a;
}

Symmetrization symmetrize(std::span<const Vector2cd> parts) {
    if (parts.empty()) throw DomainError("symmetrize: empty input");
    const int n = static_cast<int>(parts.size());
    // a_k sums the products with exactly k factors taken from |1>.
    const VectorXcd a = product_coefficients(parts);
    if (a.norm() == 0.0) throw DomainError("symmetrize: symmetrized vector has zero norm");

    std::optional<double> normalization;
    if (n <= kMaxPermanentOrder) {
        MatrixXcd gram(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) gram(i, j) = parts[i].dot(parts[j]);
        normalization = factorial(n) * permanent(gram).real();
    }
    return {SymmetricState::from_majorana_coefficients(a), normalization};
}

Symmetrization symmetrize(std::span<const QubitState> parts) {
    std::vector<Vector2cd> vectors;
    vectors.reserve(parts.size());
    for (const auto& q : parts) vectors.push_back(q.amplitudes());
    return symmetrize(std::span<const Vector2cd>(vectors));
}

double husimi(const SymmetricState& state, const QubitState& point) {
    const SymmetricState coherent = coherent_state(state.n(), point);
    return std::norm(state.dicke().dot(coherent.dicke()));
}

FullState embed_full(const SymmetricState& state) {
    const int n = state.n();
    check_full_size(n, "embed_full");
    const std::uint64_t dim = std::uint64_t{1} << n;
    std::vector<double> inv_sqrt(static_cast<std::size_t>(n + 1));
    for (int k = 0; k <= n; ++k) inv_sqrt[k] = 1.0 / std::sqrt(binomial(n, k));
    VectorXcd amps(static_cast<Eigen::Index>(dim));
    for (std::uint64_t b = 0; b < dim; ++b) {
        const int k = std::popcount(b);
        amps[static_cast<Eigen::Index>(b)] = state[k] * inv_sqrt[k];
    }
    return FullState(n, std::move(amps));
}

SymmetricState project_sym(const FullState& full, double tolerance) {
    const int n = full.n();
    const auto& amps = full.amplitudes();
    VectorXcd d = VectorXcd::Zero(n + 1);
    for (Eigen::Index b = 0; b < amps.size(); ++b)
        d[std::popcount(static_cast<std::uint64_t>(b))] += amps[b];
    for (int k = 0; k <= n; ++k) d[k] /= std::sqrt(binomial(n, k));
    const double deficit = std::max(0.0, 1.0 - d.squaredNorm());
    if (deficit > tolerance)
        throw SymmetryError("project_sym: symmetric-subspace overlap deficit " +
                                format_measure(deficit) + " exceeds tolerance " +
                                format_measure(tolerance),
                            deficit);
    return SymmetricState(std::move(d));
}

VectorXcd swap_qubits(const VectorXcd& amps, int n, int i, int j) {
    const std::uint64_t bi = std::uint64_t{1} << (n - 1 - i);
    const std::uint64_t bj = std::uint64_t{1} << (n - 1 - j);
    VectorXcd out(amps.size());
    for (Eigen::Index idx = 0; idx < amps.size(); ++idx) {
        auto b = static_cast<std::uint64_t>(idx);
        const bool xi = (b & bi) != 0;
        const bool xj = (b & bj) != 0;
        if (xi != xj) b ^= (bi | bj);
        out[static_cast<Eigen::Index>(b)] = amps[idx];
    }
    return out;
}

SymmetryReport is_permutation_symmetric(const FullState& full, double tolerance) {
    const int n = full.n();
    double deficit = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            deficit = std::max(
                deficit, (full.amplitudes() - swap_qubits(full.amplitudes(), n, i, j)).cwiseAbs().maxCoeff());
    return {deficit <= tolerance, deficit};
}

}  // namespace stellar
