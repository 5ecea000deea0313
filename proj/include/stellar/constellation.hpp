#pragma once

#include <optional>
#include <vector>

#include "stellar/state.hpp"

namespace stellar {

/// A Majorana point: a unit vector on the sphere.
class Star {
public:
    Star() : v_(0.0, 0.0, 1.0) {}
    /// Normalizes v; throws DomainError on the zero vector.
    explicit Star(const Vector3d& v);
    static Star from_angles(double theta, double phi);
    static Star from_qubit(const QubitState& q) { return Star(q.bloch()); }

    const Vector3d& vector() const { return v_; }
    double theta() const;
    double phi() const;
    QubitState qubit() const { return QubitState::from_bloch(v_); }
    Star antipode() const { return Star(-v_); }

private:
    Vector3d v_;
};

/// Great-circle distance between two stars.
double geodesic(const Star& a, const Star& b);

/// Unordered multiset of n stars; the stored order carries no meaning.
class Constellation {
public:
    Constellation() = default;
    explicit Constellation(std::vector<Star> stars) : stars_(std::move(stars)) {}

    int n() const { return static_cast<int>(stars_.size()); }
    const std::vector<Star>& stars() const { return stars_; }
    const Star& operator[](int i) const { return stars_[static_cast<std::size_t>(i)]; }

    Constellation operator+(const Constellation& other) const;
    Constellation antipode() const;

private:
    std::vector<Star> stars_;
};

/// Inverse stereographic projection: theta = 2 atan|w|, phi = arg w.
Star plane_to_sphere(Complex w);
/// Stereographic projection; std::nullopt marks the south pole (w = infinity).
std::optional<Complex> sphere_to_plane(const Star& s);

/// a_k = sqrt(C(n,k)) d_k. The stars are the roots w = e^{i phi} tan(theta/2)
/// of sum_k (-1)^k a_k w^{n-k}; vanishing trailing coefficients put stars at
/// the north pole and vanishing leading ones put stars at the south pole.
struct MajoranaPolynomial {
    int n = 0;
    VectorXcd coefficients;  // a_k, k = 0..n

    static MajoranaPolynomial of(const SymmetricState& state);
    /// Roots at w = 0, i.e. north-pole stars (zero trailing coefficients).
    int roots_at_zero(double relative_tolerance = 0.0) const;
    /// Roots at w = infinity, i.e. south-pole stars (zero leading coefficients).
    int roots_at_infinity(double relative_tolerance = 0.0) const;
};

struct StellarOptions {
    /// End coefficients with |a_k| <= pole_tolerance * max |a| count as exact pole
    /// stars. The default only treats exact zeros that way: a tiny but nonzero
    /// end coefficient is a genuine star close to a pole, and large-n coherent
    /// states legitimately have end coefficients far below max |a|.
    double pole_tolerance = 0.0;
    double residual_tolerance = 1e-12;
};

Constellation state_to_stars(const SymmetricState& state, const StellarOptions& options = {});
SymmetricState stars_to_state(const Constellation& constellation);

/// Largest geodesic error between two equal-size multisets, paired by the
/// assignment minimizing the sum of squared geodesic distances.
double constellation_distance(const Constellation& a, const Constellation& b);

}  // namespace stellar
