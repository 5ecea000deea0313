#pragma once

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace stellar {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::Vector2cd;
using Eigen::Vector3d;
using Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>. At the poles phi is 0.
class QubitState {
public:
    QubitState() = default;
    QubitState(double theta, double phi);

    static QubitState north() { return {0.0, 0.0}; }
    static QubitState south() { return {kPi, 0.0}; }
    /// Bloch angles of an arbitrary nonzero 2-vector (phase and norm discarded).
    static QubitState from_amplitudes(const Vector2cd& amplitudes);
    static QubitState from_bloch(const Vector3d& v);

    double theta() const { return theta_; }
    double phi() const { return phi_; }
    Vector2cd amplitudes() const;
    Vector3d bloch() const;
    QubitState antipode() const;

private:
    double theta_ = 0.0;
    double phi_ = 0.0;
};

/// (j, m) <-> (n, k) with n = 2j, k = n/2 - m. Stored in the (n, k) form.
struct BasisLabel {
    int n = 0;
    int k = 0;

    static BasisLabel from_nk(int n, int k);
    /// twice_j = 2j, twice_m = 2m so half-integers stay exact.
    static BasisLabel from_jm(int twice_j, int twice_m);
    int twice_j() const { return n; }
    int twice_m() const { return n - 2 * k; }
};

/// Permutation-symmetric n-qubit pure state in the Dicke basis |S_{n,k}>.
/// Always normalized, with the first non-negligible coefficient real positive.
class SymmetricState {
public:
    /// Normalizes and fixes the global phase; throws DomainError on a zero vector.
    explicit SymmetricState(VectorXcd dicke);

    int n() const { return static_cast<int>(d_.size()) - 1; }
    const VectorXcd& dicke() const { return d_; }
    Complex operator[](int k) const { return d_[k]; }

    /// Homogeneous Majorana coefficients a_k = sqrt(C(n,k)) d_k.
    VectorXcd majorana_coefficients() const;
    /// Inverse of majorana_coefficients (normalizes).
    static SymmetricState from_majorana_coefficients(const VectorXcd& a);

private:
    VectorXcd d_;
};

/// Dense 2^n amplitude vector, qubit 0 is the most significant bit of the index.
class FullState {
public:
    FullState(int n, VectorXcd amplitudes);

    int n() const { return n_; }
    const VectorXcd& amplitudes() const { return amps_; }

private:
    int n_;
    VectorXcd amps_;
};

/// |<a|b>|.
double fidelity(const SymmetricState& a, const SymmetricState& b);

SymmetricState dicke_state(int n, int k);
SymmetricState coherent_state(int n, const QubitState& center);

struct Symmetrization {
    SymmetricState state;
    /// n! perm(G) with G_ij = <phi_i|phi_j>; empty when n exceeds the permanent limit.
    std::optional<double> normalization;
};

/// Coefficients of prod_i (u_i + v_i t) for parts (u_i, v_i): the homogeneous
/// Majorana coefficients of the symmetrized product, unnormalized.
VectorXcd product_coefficients(std::span<const Vector2cd> parts);

/// Normalized sum over all orderings of the product of the given qubits.
Symmetrization symmetrize(std::span<const QubitState> parts);
/// Same for arbitrary (unnormalized) single-qubit vectors.
Symmetrization symmetrize(std::span<const Vector2cd> parts);

/// |<state|coherent_state(n, point)>|^2.
double husimi(const SymmetricState& state, const QubitState& point);

FullState embed_full(const SymmetricState& state);
/// Inverse of embed_full; throws SymmetryError when the state leaves the
/// symmetric subspace by more than `tolerance` (norm deficit).
SymmetricState project_sym(const FullState& full, double tolerance = 1e-8);

struct SymmetryReport {
    bool symmetric;
    double deficit;  // max entry of |psi - swap_ij psi| over all pairs i < j
};

/// Checks invariance under every transposition of two qubits.
SymmetryReport is_permutation_symmetric(const FullState& full, double tolerance);

/// Swaps qubits i and j in a 2^n vector.
VectorXcd swap_qubits(const VectorXcd& amps, int n, int i, int j);

}  // namespace stellar
