#pragma once

#include <Eigen/Core>

#include "stellar/constellation.hpp"
#include "stellar/state.hpp"

namespace stellar {

/// Mean of the star unit vectors; lies in the closed unit ball.
struct Barycenter {
    Vector3d center = Vector3d::Zero();
    double radius() const { return center.norm(); }
};

Barycenter barycenter(const Constellation& c);

/// Barycentric measure 1 - d^2, the variance of the star distribution.
double e_b(const Constellation& c);
double e_b(const SymmetricState& state);

struct GeometricOptions {
    int grid_theta = 64;
    int grid_phi = 128;
    /// Number of best grid local maxima used as ascent starts.
    int grid_starts = 8;
    /// Also start from every star position.
    bool star_starts = true;
    /// On |grad Q| with respect to arc length on the sphere.
    double gradient_tolerance = 1e-12;
    int max_iterations = 200;
};

struct GeometricResult {
    double value = 0.0;   // -log2(overlap), in bits
    QubitState witness;   // direction of the closest symmetric product state
    double overlap = 1.0; // max |<a^{(x)n}|psi>|^2
};

/// Geometric measure over symmetric product states, i.e. the maximum of the
/// Husimi function. Throws NumericError (carrying the best value) if no start converges.
GeometricResult e_g(const SymmetricState& state, const GeometricOptions& options = {});

/// Closed form for Dicke states with its known maximizing product direction.
GeometricResult e_g_dicke(int n, int k);

/// Analytic (dQ/dtheta, dQ/dphi) of the Husimi function.
Eigen::Vector2d husimi_gradient(const SymmetricState& state, const QubitState& point);

/// |0> (x) (cos(t/2)|0> + sin(t/2)|1>), symmetrized.
SymmetricState two_qubit_family(double theta);
/// |0>, cos(t/2)|0> - sin(t/2)|1>, cos(t/2)|0> + sin(t/2)|1>, symmetrized.
SymmetricState three_qubit_family(double theta);
/// Four-qubit rectangle family with E_B = 1 for every (theta, phi).
SymmetricState rec_family_state(double theta, double phi);
SymmetricState tetrahedron_state();
/// (|0...0> + |1...1>)/sqrt(2).
SymmetricState ghz_state(int n);

/// exp(-i angle/2 axis . sigma); rotates Bloch vectors by `angle` about `axis`.
Eigen::Matrix2cd rotation_unitary(const Star& axis, double angle);
/// The action of u^{(x)n} on a symmetric state, computed in the Dicke basis.
SymmetricState apply_local_unitary(const SymmetricState& state, const Eigen::Matrix2cd& u);
/// Rigid rotation of the whole constellation.
SymmetricState rotate_state(const SymmetricState& state, const Star& axis, double angle);
Star rotate(const Star& s, const Star& axis, double angle);
Constellation rotate(const Constellation& c, const Star& axis, double angle);

}  // namespace stellar
