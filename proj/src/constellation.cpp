#include "stellar/constellation.hpp"

#include <algorithm>
#include <cmath>

#include "stellar/assignment.hpp"
#include "stellar/errors.hpp"
#include "stellar/polynomial.hpp"

namespace stellar {

Star::Star(const Vector3d& v) {
    const double r = v.norm();
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("Star: vector must be finite and nonzero");
    v_ = v / r;
}

Star Star::from_angles(double theta, double phi) {
    const double ct = std::cos(theta);
    // sin(pi) is not zero in floating point; keep the poles exact.
    const double st = std::abs(ct) == 1.0 ? 0.0 : std::sin(theta);
    return Star(Vector3d(st * std::cos(phi), st * std::sin(phi), ct));
}

double Star::theta() const { return std::atan2(std::hypot(v_.x(), v_.y()), v_.z()); }

double Star::phi() const {
    if (v_.x() == 0.0 && v_.y() == 0.0) return 0.0;
    double p = std::atan2(v_.y(), v_.x());
    if (p < 0) p += 2.0 * kPi;
    return p >= 2.0 * kPi ? 0.0 : p;
}

double geodesic(const Star& a, const Star& b) {
    return std::atan2(a.vector().cross(b.vector()).norm(), a.vector().dot(b.vector()));
}

Constellation Constellation::operator+(const Constellation& other) const {
    std::vector<Star> all = stars_;
    all.insert(all.end(), other.stars_.begin(), other.stars_.end());
    return Constellation(std::move(all));
}

Constellation Constellation::antipode() const {
    std::vector<Star> out;
    out.reserve(stars_.size());
    for (const auto& s : stars_) out.push_back(s.antipode());
    return Constellation(std::move(out));
}

Star plane_to_sphere(Complex w) {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw DomainError("plane_to_sphere: non-finite point");
    const double r = std::abs(w);
    return Star::from_angles(2.0 * std::atan(r), r == 0.0 ? 0.0 : std::arg(w));
}

std::optional<Complex> sphere_to_plane(const Star& s) {
    const Vector3d& v = s.vector();
    const double rho = std::hypot(v.x(), v.y());
    if (v.z() >= 0.0) return Complex(v.x(), v.y()) / (1.0 + v.z());
    if (rho == 0.0) return std::nullopt;
    // tan(theta/2) = (1 - z) / rho avoids the cancellation in 1 + z.
    return Complex(v.x(), v.y()) * ((1.0 - v.z()) / (rho * rho));
}

MajoranaPolynomial MajoranaPolynomial::of(const SymmetricState& state) {
    return {state.n(), state.majorana_coefficients()};
}

int MajoranaPolynomial::roots_at_zero(double relative_tolerance) const {
    const double cut = relative_tolerance * coefficients.cwiseAbs().maxCoeff();
    int count = 0;
    for (int k = n; k >= 0 && std::abs(coefficients[k]) <= cut; --k) ++count;
    return count;
}

int MajoranaPolynomial::roots_at_infinity(double relative_tolerance) const {
    const double cut = relative_tolerance * coefficients.cwiseAbs().maxCoeff();
    int count = 0;
    for (int k = 0; k <= n && std::abs(coefficients[k]) <= cut; ++k) ++count;
    return count;
}

Constellation state_to_stars(const SymmetricState& state, const StellarOptions& options) {
    const auto poly = MajoranaPolynomial::of(state);
    const int n = poly.n;
    const int south = poly.roots_at_infinity(options.pole_tolerance);
    const int north = poly.roots_at_zero(options.pole_tolerance);

    std::vector<Star> stars;
    stars.reserve(static_cast<std::size_t>(n));
    stars.insert(stars.end(), static_cast<std::size_t>(north), Star::from_angles(0.0, 0.0));
    stars.insert(stars.end(), static_cast<std::size_t>(south), Star::from_angles(kPi, 0.0));

    // Roots in w = e^{i phi} tan(theta/2) of sum_k (-1)^k a_k w^{n-k}, with the
    // w^north factor and the missing top south degrees removed.
    const int degree = n - south - north;
    if (degree > 0) {
        std::vector<Complex> c(static_cast<std::size_t>(degree + 1));
        for (int j = north; j <= n - south; ++j) {
            const int k = n - j;
            c[static_cast<std::size_t>(j - north)] = ((k % 2 == 0) ? 1.0 : -1.0) * poly.coefficients[k];
        }
        RootOptions<double> ro;
        ro.residual_tol = options.residual_tolerance;
        const auto report = polynomial_roots<double>(c, ro);
        for (const Complex& w : report.roots) stars.push_back(plane_to_sphere(w));
    }
    std::sort(stars.begin(), stars.end(), [](const Star& a, const Star& b) {
        const double ta = a.theta(), tb = b.theta();
        if (ta != tb) return ta < tb;
        return a.phi() < b.phi();
    });
    return Constellation(std::move(stars));
}

SymmetricState stars_to_state(const Constellation& constellation) {
    if (constellation.n() < 1) throw DomainError("stars_to_state: empty constellation");
    std::vector<Vector2cd> parts;
    parts.reserve(static_cast<std::size_t>(constellation.n()));
    for (const auto& s : constellation.stars()) parts.push_back(s.qubit().amplitudes());
    return SymmetricState::from_majorana_coefficients(product_coefficients(parts));
}

double constellation_distance(const Constellation& a, const Constellation& b) {
    if (a.n() != b.n()) throw DomainError("constellation_distance: different star counts");
    const int n = a.n();
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = std::pow(geodesic(a[i], b[j]), 2);
    const auto match = min_cost_assignment(cost);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, geodesic(a[i], b[match[i]]));
    return worst;
}

}  // namespace stellar
