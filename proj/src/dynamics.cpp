#include "stellar/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "stellar/assignment.hpp"
#include "stellar/errors.hpp"
#include "stellar/measures.hpp"

namespace stellar {

namespace {

constexpr double kComplementThreshold = 1e-8;

int qubits_for_dimension(Eigen::Index dim, const char* op) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    if (n < 1 || (Eigen::Index{1} << n) != dim)
        throw DomainError(std::string(op) + ": dimension " + std::to_string(dim) + " is not 2^n with n >= 1");
    return n;
}

void check_qubits(int n, const char* op) {
    if (n < 1) throw DomainError(std::string(op) + ": n must be positive");
    if (n > kMaxHamiltonianQubits)
        throw ResourceError(std::string(op) + ": " + std::to_string(n) + " qubits exceeds the limit of " +
                            std::to_string(kMaxHamiltonianQubits));
}

// Generator diagonalized once; state(beta) = Q exp(-i beta Lambda) Q^dagger psi0.
class Propagator {
public:
    Propagator(const MatrixXcd& h, const VectorXcd& psi0) : psi0_(psi0) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(h);
        if (eig.info() != Eigen::Success) throw NumericError("evolve: Hermitian eigensolver failed");
        q_ = eig.eigenvectors();
        lambda_ = eig.eigenvalues();
        c0_ = q_.adjoint() * psi0;
    }

    SymmetricState at(double beta) const {
        // Q Q^dagger is the identity only to round-off, and a 1e-16 error in a
        // vanishing coefficient moves pole stars by 1e-8.
        if (beta == 0.0) return SymmetricState(psi0_);
        VectorXcd c = c0_;
        for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -beta * lambda_[k]);
        return SymmetricState(q_ * c);
    }

private:
    MatrixXcd q_;
    Eigen::VectorXd lambda_;
    VectorXcd c0_;
    VectorXcd psi0_;
};

// Reorders `next` so that star i continues star i of `prev`; returns the largest move.
double match_stars(const Constellation& prev, Constellation& next) {
    const int n = prev.n();
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = geodesic(prev[i], next[j]);
    const auto col = min_cost_assignment(cost);
    std::vector<Star> ordered;
    ordered.reserve(static_cast<std::size_t>(n));
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        ordered.push_back(next[col[i]]);
        worst = std::max(worst, cost(i, col[i]));
    }
    next = Constellation(std::move(ordered));
    return worst;
}

class Stepper {
public:
    Stepper(const Propagator& prop, const EvolveOptions& options, Trajectory& out)
        : prop_(prop), options_(options), out_(out) {}

    void start(double beta) {
        TrajectoryPoint p = make(beta, true);
        p.stars = state_to_stars(p.state);
        p.e_b = e_b(p.stars);
        out_.points.push_back(std::move(p));
    }

    // Advances from the last point to `beta`, bisecting while a star jumps too far.
    void advance(double beta, bool requested, int depth = 0) {
        const TrajectoryPoint& prev = out_.points.back();
        TrajectoryPoint next = make(beta, requested);
        Constellation stars = state_to_stars(next.state);
        const double move = match_stars(prev.stars, stars);
        if (move > options_.step_bound) {
            if (depth < options_.max_refinement_depth) {
                const double mid = 0.5 * (prev.beta + beta);
                advance(mid, false, depth + 1);
                advance(beta, requested, depth + 1);
                return;
            }
            next.discontinuity = true;
        }
        next.stars = std::move(stars);
        next.e_b = e_b(next.stars);
        out_.points.push_back(std::move(next));
    }

private:
    TrajectoryPoint make(double beta, bool requested) const {
        return TrajectoryPoint{beta, prop_.at(beta), {}, 0.0, requested, false};
    }

    const Propagator& prop_;
    const EvolveOptions& options_;
    Trajectory& out_;
};

}  // namespace

TransitionBasis build_transition(int n) {
    check_qubits(n, "build_transition");
    const Eigen::Index dim = Eigen::Index{1} << n;
    MatrixXcd t(dim, dim);
    t.leftCols(n + 1) = symmetric_isometry(n);
    Eigen::Index filled = n + 1;
    for (Eigen::Index e = 0; e < dim && filled < dim; ++e) {
        VectorXcd v = VectorXcd::Unit(dim, e);
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index c = 0; c < filled; ++c) v -= t.col(c).dot(v) * t.col(c);
        const double norm = v.norm();
        if (norm > kComplementThreshold) t.col(filled++) = v / norm;
    }
    if (filled != dim) throw NumericError("build_transition: complement basis is incomplete");
    return {n, std::move(t)};
}

MatrixXcd symmetric_isometry(int n) {
    check_qubits(n, "symmetric_isometry");
    const Eigen::Index dim = Eigen::Index{1} << n;
    MatrixXcd s(dim, n + 1);
    for (int k = 0; k <= n; ++k) s.col(k) = embed_full(dicke_state(n, k)).amplitudes();
    return s;
}

MatrixXcd exponentiate(const MatrixXcd& hermitian, double beta) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(hermitian);
    if (eig.info() != Eigen::Success) throw NumericError("exponentiate: Hermitian eigensolver failed");
    const MatrixXcd& q = eig.eigenvectors();
    VectorXcd phases(q.cols());
    for (Eigen::Index k = 0; k < q.cols(); ++k) phases[k] = std::polar(1.0, -beta * eig.eigenvalues()[k]);
    return q * phases.asDiagonal() * q.adjoint();
}

MatrixXcd exponentiate(const HermitianOperator& h, double beta) { return exponentiate(h.matrix, beta); }

BlockDecomposition reduce(const MatrixXcd& u, double tolerance) {
    if (u.rows() != u.cols()) throw DomainError("reduce: matrix is not square");
    return reduce(u, build_transition(qubits_for_dimension(u.rows(), "reduce")).t, tolerance);
}

BlockDecomposition reduce(const MatrixXcd& u, const MatrixXcd& basis, double tolerance) {
    if (u.rows() != u.cols() || basis.rows() != u.rows() || basis.cols() != u.cols())
        throw DomainError("reduce: matrix and basis sizes differ");
    const int n = qubits_for_dimension(u.rows(), "reduce");
    const Eigen::Index s = n + 1;
    const Eigen::Index c = u.rows() - s;
    const MatrixXcd up = basis.adjoint() * u * basis;
    BlockDecomposition out;
    out.offblock_norm = std::hypot(up.topRightCorner(s, c).norm(), up.bottomLeftCorner(c, s).norm());
    if (out.offblock_norm > tolerance)
        throw SymmetryError("reduce: off-block norm " + format_measure(out.offblock_norm) + " exceeds tolerance " +
                                format_measure(tolerance),
                            out.offblock_norm);
    out.v = up.topLeftCorner(s, s);
    out.w = up.bottomRightCorner(c, c);
    return out;
}

double unitarity_deficit(const MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    return (m.adjoint() * m - MatrixXcd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

Trajectory evolve(const HermitianOperator& h, const SymmetricState& psi0, std::span<const double> betas,
                  const EvolveOptions& options) {
    if (h.n != psi0.n())
        throw DomainError("evolve: Hamiltonian acts on " + std::to_string(h.n) + " qubits, state has " +
                          std::to_string(psi0.n()));
    const double deficit = permutation_deficit(h);
    if (deficit > options.symmetry_tolerance)
        throw SymmetryError("evolve: Hamiltonian permutation deficit " + format_measure(deficit) +
                                " exceeds tolerance " + format_measure(options.symmetry_tolerance),
                            deficit);
    const MatrixXcd s = symmetric_isometry(h.n);
    return evolve_reduced(s.adjoint() * h.matrix * s, psi0, betas, options);
}

Trajectory evolve_reduced(const MatrixXcd& h_sym, const SymmetricState& psi0, std::span<const double> betas,
                          const EvolveOptions& options) {
    if (h_sym.rows() != psi0.n() + 1 || h_sym.cols() != psi0.n() + 1)
        throw DomainError("evolve: reduced generator size does not match the state");
    if (betas.empty()) throw DomainError("evolve: empty beta grid");
    const bool increasing = betas.size() < 2 || betas[1] > betas[0];
    for (std::size_t k = 1; k < betas.size(); ++k)
        if (increasing ? !(betas[k] > betas[k - 1]) : !(betas[k] < betas[k - 1]))
            throw DomainError("evolve: beta grid is not strictly monotone");
    if (!(options.step_bound > 0.0)) throw DomainError("evolve: step bound must be positive");

    const Propagator prop(h_sym, psi0.dicke());
    Trajectory traj;
    Stepper stepper(prop, options, traj);
    stepper.start(betas[0]);
    for (std::size_t k = 1; k < betas.size(); ++k) stepper.advance(betas[k], true);
    return traj;
}

Eigen::MatrixXd unwrapped_theta(const Trajectory& trajectory) {
    const auto& pts = trajectory.points;
    const Eigen::Index count = static_cast<Eigen::Index>(pts.size());
    const int n = pts.empty() ? 0 : pts.front().stars.n();
    Eigen::MatrixXd out(count, n);
    for (int i = 0; i < n; ++i) {
        double sigma = 1.0;
        out(0, i) = pts[0].stars[i].theta();
        for (Eigen::Index p = 1; p < count; ++p) {
            const Star& a = pts[static_cast<std::size_t>(p - 1)].stars[i];
            const Star& b = pts[static_cast<std::size_t>(p)].stars[i];
            const double to = a.theta(), tn = b.theta(), g = geodesic(a, b);
            // Direct step, or a pass through the south or north pole; the one
            // whose polar travel best explains the actual move wins.
            const double candidates[3] = {sigma * (tn - to), sigma * (2.0 * kPi - to - tn), -sigma * (to + tn)};
            // A star sitting exactly on a pole makes the choice a tie; then keep
            // the previous direction of travel.
            const double last = p >= 2 ? out(p - 1, i) - out(p - 2, i) : 0.0;
            auto miss = [&](int c) { return std::abs(std::abs(candidates[c]) - g); };
            int best = 0;
            for (int c = 1; c < 3; ++c) {
                const double d = miss(c) - miss(best);
                if (d < -1e-12 || (std::abs(d) <= 1e-12 && candidates[c] * last > 0 && candidates[best] * last <= 0))
                    best = c;
            }
            if (best != 0) sigma = -sigma;
            out(p, i) = out(p - 1, i) + candidates[best];
        }
    }
    return out;
}

VelocityProfile velocity(const Trajectory& trajectory) {
    const auto& pts = trajectory.points;
    const Eigen::Index count = static_cast<Eigen::Index>(pts.size());
    if (count < 3) throw DomainError("velocity: need at least 3 trajectory points");
    const Eigen::MatrixXd theta = unwrapped_theta(trajectory);
    const Eigen::Index n = theta.cols();

    VelocityProfile vp;
    vp.betas.reserve(pts.size());
    for (const auto& p : pts) vp.betas.push_back(p.beta);
    const auto& x = vp.betas;
    vp.rate.resize(count, n);
    vp.flag.setConstant(count, n, false);

    for (Eigen::Index i = 0; i < n; ++i) {
        auto f = [&](Eigen::Index p) { return theta(p, i); };
        // Three-point second-order weights on a non-uniform grid.
        for (Eigen::Index p = 0; p < count; ++p) {
            const Eigen::Index c = std::clamp<Eigen::Index>(p, 1, count - 2);
            const double h1 = x[c] - x[c - 1], h2 = x[c + 1] - x[c];
            double w0, w1, w2;
            if (p == c) {
                w0 = -h2 / (h1 * (h1 + h2));
                w1 = (h2 - h1) / (h1 * h2);
                w2 = h1 / (h2 * (h1 + h2));
            } else if (p < c) {
                w0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
                w1 = (h1 + h2) / (h1 * h2);
                w2 = -h1 / (h2 * (h1 + h2));
            } else {
                w0 = h2 / (h1 * (h1 + h2));
                w1 = -(h1 + h2) / (h1 * h2);
                w2 = (h1 + 2.0 * h2) / (h2 * (h1 + h2));
            }
            vp.rate(p, i) = w0 * f(c - 1) + w1 * f(c) + w2 * f(c + 1);
        }
        for (Eigen::Index p = 1; p < count; ++p) {
            if (std::abs(f(p) - f(p - 1)) > 1.0) vp.flag(p - 1, i) = vp.flag(p, i) = true;
        }
        for (Eigen::Index c = 1; c + 1 < count; ++c) {
            const double s1 = (f(c) - f(c - 1)) / (x[c] - x[c - 1]);
            const double s2 = (f(c + 1) - f(c)) / (x[c + 1] - x[c]);
            const double scale = std::max(std::abs(s1), std::abs(s2));
            if (std::abs(s2 - s1) > 0.5 * scale && scale > 1e-9) {
                vp.flag(c, i) = true;
                if (c == 1) vp.flag(0, i) = true;
                if (c + 2 == count) vp.flag(count - 1, i) = true;
            }
        }
    }
    return vp;
}

std::vector<std::pair<double, double>> e_b_profile(const Trajectory& trajectory) {
    std::vector<std::pair<double, double>> out;
    out.reserve(trajectory.points.size());
    for (const auto& p : trajectory.points) out.emplace_back(p.beta, p.e_b);
    return out;
}

}  // namespace stellar
