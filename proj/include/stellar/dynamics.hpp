#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "stellar/constellation.hpp"
#include "stellar/hamiltonian.hpp"
#include "stellar/state.hpp"

namespace stellar {

/// Unitary 2^n x 2^n basis change: Dicke vectors |S_{n,0}>..|S_{n,n}> first,
/// then the complement by modified Gram-Schmidt over e_0, e_1, ... in order.
struct TransitionBasis {
    int n = 0;
    MatrixXcd t;
};

TransitionBasis build_transition(int n);

/// The 2^n x (n+1) isometry onto the symmetric subspace (first n+1 columns of T).
MatrixXcd symmetric_isometry(int n);

/// exp(-i beta H) by Hermitian eigendecomposition.
MatrixXcd exponentiate(const HermitianOperator& h, double beta);
MatrixXcd exponentiate(const MatrixXcd& hermitian, double beta);

struct BlockDecomposition {
    MatrixXcd v;                 // (n+1) x (n+1), acts on Dicke coefficients
    MatrixXcd w;                 // complement block
    double offblock_norm = 0.0;  // Frobenius norm of both off-diagonal blocks
};

/// T^dagger U T split as V (+) W. SymmetryError if the off-block norm exceeds tolerance.
BlockDecomposition reduce(const MatrixXcd& u, double tolerance = 1e-10);
/// Same with a caller-supplied basis whose first n+1 columns span the symmetric subspace.
BlockDecomposition reduce(const MatrixXcd& u, const MatrixXcd& basis, double tolerance = 1e-10);

/// Largest |M^dagger M - I| entry.
double unitarity_deficit(const MatrixXcd& m);

struct EvolveOptions {
    /// Largest accepted geodesic move of a matched star between consecutive points.
    double step_bound = 0.2;
    int max_refinement_depth = 12;
    /// On the permutation deficit of H.
    double symmetry_tolerance = 1e-10;
};

struct TrajectoryPoint {
    double beta = 0.0;
    SymmetricState state;
    /// Star i keeps its identity from one point to the next.
    Constellation stars;
    double e_b = 0.0;
    /// False for midpoints inserted by the step control.
    bool requested = true;
    /// Refinement ran out before the star moves dropped below the bound.
    bool discontinuity = false;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
};

/// Evolves psi0 under exp(-i beta H) in the (n+1)-dimensional symmetric block.
/// Requires a monotone beta grid and a permutation-invariant H (SymmetryError otherwise).
Trajectory evolve(const HermitianOperator& h, const SymmetricState& psi0, std::span<const double> betas,
                  const EvolveOptions& options = {});

/// Same, starting from the reduced generator T_sym^dagger H T_sym.
Trajectory evolve_reduced(const MatrixXcd& h_sym, const SymmetricState& psi0, std::span<const double> betas,
                          const EvolveOptions& options = {});

struct VelocityProfile {
    std::vector<double> betas;
    /// rate(p, i) = d theta_i / d beta at point p.
    Eigen::MatrixXd rate;
    /// Divergence windows: a polar step above 1 rad, or a rate changing by more
    /// than half across the difference stencil.
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> flag;
};

/// Second-order finite differences of the matched polar angles. The polar angle
/// is unwrapped when a star passes through a pole, so a star looping over the
/// sphere keeps a continuous rate. Needs at least 3 points.
VelocityProfile velocity(const Trajectory& trajectory);

/// Polar angle tracks continued through the poles: each column is one star.
Eigen::MatrixXd unwrapped_theta(const Trajectory& trajectory);

std::vector<std::pair<double, double>> e_b_profile(const Trajectory& trajectory);

}  // namespace stellar
