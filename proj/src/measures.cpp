#include "stellar/measures.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stellar/errors.hpp"
#include "stellar/numeric.hpp"

namespace stellar {

Barycenter barycenter(const Constellation& c) {
    if (c.n() < 1) throw DomainError("barycenter: empty constellation");
    Vector3d sum = Vector3d::Zero();
    for (const auto& s : c.stars()) sum += s.vector();
    return {sum / c.n()};
}

double e_b(const Constellation& c) {
    const double d = barycenter(c).radius();
    return std::clamp(1.0 - d * d, 0.0, 1.0);
}

double e_b(const SymmetricState& state) { return e_b(state_to_stars(state)); }

namespace {

// Husimi function in a stereographic chart:
//   Q = |g(w)|^2 / (1 + |w|^2)^n,  g(w) = sum_k conj(a_k) w^k,
// and in the chart v = 1/w the same form holds with a reversed.
// Ascent works on L = log Q in real chart coordinates, which stays smooth at
// both poles as long as |w| <= 1 in the active chart.
struct HusimiChart {
    int n;
    std::vector<Complex> forward;
    std::vector<Complex> reversed;

    explicit HusimiChart(const SymmetricState& state) : n(state.n()) {
        const VectorXcd a = state.majorana_coefficients();
        forward.resize(static_cast<std::size_t>(n + 1));
        reversed.resize(static_cast<std::size_t>(n + 1));
        for (int k = 0; k <= n; ++k) {
            forward[k] = std::conj(a[k]);
            reversed[n - k] = std::conj(a[k]);
        }
    }

    const std::vector<Complex>& coefficients(bool flipped) const { return flipped ? reversed : forward; }
};

struct ChartPoint {
    bool flipped = false;  // true: coordinate is v = 1/w
    Complex w;

    // Keeps |w| <= 1 by switching charts.
    void normalize() {
        if (std::abs(w) > 1.0) {
            w = 1.0 / w;
            flipped = !flipped;
        }
    }

    QubitState qubit() const {
        const double r = std::abs(w);
        const double half = std::atan(r);
        if (!flipped) return {2.0 * half, r == 0.0 ? 0.0 : std::arg(w)};
        return {kPi - 2.0 * half, r == 0.0 ? 0.0 : -std::arg(w)};
    }

    static ChartPoint from(const QubitState& q) {
        ChartPoint p;
        if (q.theta() <= kPi / 2) {
            p.w = std::polar(std::tan(q.theta() / 2.0), q.phi());
        } else {
            p.flipped = true;
            p.w = std::polar(std::tan((kPi - q.theta()) / 2.0), -q.phi());
        }
        return p;
    }
};

struct LogHusimi {
    double q = 0.0;
    double log_q = -std::numeric_limits<double>::infinity();
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

double husimi_value(const HusimiChart& chart, const ChartPoint& p) {
    const auto& c = chart.coefficients(p.flipped);
    Complex g = c.back();
    for (std::size_t j = c.size() - 1; j-- > 0;) g = g * p.w + c[j];
    return std::norm(g) / std::pow(1.0 + std::norm(p.w), chart.n);
}

LogHusimi evaluate(const HusimiChart& chart, const ChartPoint& p) {
    const auto& c = chart.coefficients(p.flipped);
    const Complex w = p.w;
    Complex g = c.back(), g1 = 0.0, g2 = 0.0;
    for (std::size_t j = c.size() - 1; j-- > 0;) {
        g2 = g2 * w + 2.0 * g1;
        g1 = g1 * w + g;
        g = g * w + c[j];
    }
    LogHusimi out;
    const double h = 1.0 + std::norm(w);
    const int n = chart.n;
    out.q = std::norm(g) / std::pow(h, n);
    if (g == Complex(0.0)) return out;
    out.log_q = std::log(std::norm(g)) - n * std::log(h);

    const Complex big_g = g1 / g;                      // (log g)'
    const Complex f2 = (g2 * g - g1 * g1) / (g * g);   // (log g)''
    const Eigen::Vector2d xy(w.real(), w.imag());
    out.grad = 2.0 * Eigen::Vector2d(big_g.real(), -big_g.imag()) - 2.0 * n * xy / h;
    Eigen::Matrix2d holo;
    holo << f2.real(), -f2.imag(), -f2.imag(), -f2.real();
    out.hess = 2.0 * holo -
               2.0 * n * (Eigen::Matrix2d::Identity() / h - 2.0 * xy * xy.transpose() / (h * h));
    return out;
}

// |grad Q| with respect to arc length on the unit sphere.
double sphere_gradient_norm(const LogHusimi& v, const ChartPoint& p) {
    return v.q * v.grad.norm() * (1.0 + std::norm(p.w)) / 2.0;
}

struct AscentResult {
    bool converged = false;
    double q = 0.0;
    QubitState point;
};

AscentResult ascend(const HusimiChart& chart, ChartPoint p, const GeometricOptions& options) {
    AscentResult result;
    p.normalize();
    LogHusimi cur = evaluate(chart, p);
    for (int it = 0; it < options.max_iterations; ++it) {
        if (!std::isfinite(cur.log_q)) {
            // Started on a zero of Q: nudge off it.
            p.w += Complex(1e-3, 1e-3);
            p.normalize();
            cur = evaluate(chart, p);
            continue;
        }
        if (sphere_gradient_norm(cur, p) <= options.gradient_tolerance) {
            result.converged = true;
            break;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cur.hess);
        Eigen::Vector2d step = Eigen::Vector2d::Zero();
        for (int i = 0; i < 2; ++i) {
            const double lambda = es.eigenvalues()[i];
            const Eigen::Vector2d v = es.eigenvectors().col(i);
            // Newton along concave directions, scaled gradient along the rest.
            const double curvature = lambda < -1e-10 ? -lambda : std::max(std::abs(lambda), 1.0);
            step += v * (v.dot(cur.grad) / curvature);
        }
        const double max_step = 0.5;
        if (step.norm() > max_step) step *= max_step / step.norm();

        bool moved = false;
        for (int halving = 0; halving < 60; ++halving) {
            ChartPoint trial = p;
            trial.w += Complex(step.x(), step.y());
            trial.normalize();
            const LogHusimi next = evaluate(chart, trial);
            // log Q can only be compared to rounding; a Newton step that keeps
            // it level still shrinks the gradient.
            const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(cur.log_q));
            if (next.log_q >= cur.log_q - slack) {
                moved = trial.w != p.w || trial.flipped != p.flipped;
                p = trial;
                cur = next;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            // No step keeps log Q level: the remaining gradient is rounding noise
            // or the tolerance is out of reach.
            result.converged = sphere_gradient_norm(cur, p) <= options.gradient_tolerance;
            break;
        }
    }
    if (!result.converged && sphere_gradient_norm(cur, p) <= options.gradient_tolerance)
        result.converged = true;
    result.q = cur.q;
    result.point = p.qubit();
    return result;
}

bool precedes(const QubitState& a, const QubitState& b) {
    if (std::abs(a.theta() - b.theta()) > 1e-9) return a.theta() < b.theta();
    return a.phi() < b.phi();
}

}  // namespace

GeometricResult e_g(const SymmetricState& state, const GeometricOptions& options) {
    if (options.grid_theta < 2 || options.grid_phi < 2)
        throw DomainError("e_g: grid sizes must be at least 2");
    const HusimiChart chart(state);

    // Coarse grid over cell centres in theta, uniform in phi.
    const int nt = options.grid_theta, np = options.grid_phi;
    Eigen::MatrixXd grid(nt, np);
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < np; ++j)
            grid(i, j) = husimi_value(
                chart, ChartPoint::from(QubitState((i + 0.5) * kPi / nt, 2.0 * kPi * j / np)));

    std::vector<std::pair<double, int>> peaks;
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < np; ++j) {
            bool is_peak = true;
            for (int di = -1; di <= 1 && is_peak; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ii = i + di;
                    if (ii < 0 || ii >= nt) continue;
                    const int jj = (j + dj + np) % np;
                    if (grid(ii, jj) > grid(i, j)) {
                        is_peak = false;
                        break;
                    }
                }
            if (is_peak) peaks.emplace_back(grid(i, j), i * np + j);
        }
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    std::vector<QubitState> starts;
    for (int s = 0; s < std::min<int>(options.grid_starts, static_cast<int>(peaks.size())); ++s) {
        const int i = peaks[s].second / np, j = peaks[s].second % np;
        starts.emplace_back((i + 0.5) * kPi / nt, 2.0 * kPi * j / np);
    }
    if (options.star_starts) {
        const Constellation stars = state_to_stars(state);
        for (const auto& star : stars.stars()) starts.push_back(star.qubit());
    }

    std::vector<AscentResult> converged;
    double best_any = 0.0;
    for (const auto& start : starts) {
        AscentResult r = ascend(chart, ChartPoint::from(start), options);
        best_any = std::max(best_any, r.q);
        if (r.converged) converged.push_back(std::move(r));
    }
    if (converged.empty())
        throw NumericError("e_g: no ascent start converged to gradient norm " +
                               format_measure(options.gradient_tolerance),
                           best_any > 0 ? -std::log2(best_any) : std::numeric_limits<double>::infinity());

    // Largest value wins; among values tied to 1e-12 the witness is the
    // smallest (theta, phi).
    double q_max = 0.0;
    for (const auto& r : converged) q_max = std::max(q_max, r.q);
    const AscentResult* best = nullptr;
    for (const auto& r : converged)
        if (r.q >= q_max * (1.0 - 1e-12) && (best == nullptr || precedes(r.point, best->point))) best = &r;

    const double overlap = std::min(q_max, 1.0);
    return {std::max(0.0, -std::log2(overlap)), best->point, overlap};
}

GeometricResult e_g_dicke(int n, int k) {
    if (n < 1 || k < 0 || k > n) throw DomainError("e_g_dicke: need 0 <= k <= n, n >= 1");
    const QubitState witness(2.0 * std::asin(std::sqrt(static_cast<double>(k) / n)), 0.0);
    if (k == 0 || k == n) return {0.0, witness, 1.0};
    const double value = k * std::log2(static_cast<double>(n) / k) +
                         (n - k) * std::log2(static_cast<double>(n) / (n - k)) -
                         std::log2(binomial(n, k));
    return {value, witness, std::exp2(-value)};
}

Eigen::Vector2d husimi_gradient(const SymmetricState& state, const QubitState& point) {
    const HusimiChart chart(state);
    const ChartPoint p = ChartPoint::from(point);
    const LogHusimi v = evaluate(chart, p);
    const Eigen::Vector2d dq = v.q * v.grad;
    const double h = 1.0 + std::norm(p.w);
    Complex dw_dtheta, dw_dphi;
    if (!p.flipped) {
        dw_dtheta = 0.5 * h * std::polar(1.0, point.phi());
        dw_dphi = Complex(0.0, 1.0) * p.w;
    } else {
        dw_dtheta = -0.5 * h * std::polar(1.0, -point.phi());
        dw_dphi = Complex(0.0, -1.0) * p.w;
    }
    return {dq.x() * dw_dtheta.real() + dq.y() * dw_dtheta.imag(),
            dq.x() * dw_dphi.real() + dq.y() * dw_dphi.imag()};
}

SymmetricState two_qubit_family(double theta) {
    const std::vector<QubitState> parts{QubitState::north(), QubitState(theta, 0.0)};
    return symmetrize(std::span<const QubitState>(parts)).state;
}

SymmetricState three_qubit_family(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const std::vector<Vector2cd> parts{Vector2cd(1.0, 0.0), Vector2cd(c, -s), Vector2cd(c, s)};
    return symmetrize(std::span<const Vector2cd>(parts)).state;
}

SymmetricState rec_family_state(double theta, double phi) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const double cc = std::cos((kPi - theta) / 2.0), ss = std::sin((kPi - theta) / 2.0);
    const Complex e = std::polar(1.0, phi);
    const std::vector<Vector2cd> parts{Vector2cd(c, e * s), Vector2cd(c, -e * s), Vector2cd(cc, ss),
                                       Vector2cd(cc, -ss)};
    return symmetrize(std::span<const Vector2cd>(parts)).state;
}

SymmetricState tetrahedron_state() { return rec_family_state(std::acos(1.0 / std::sqrt(3.0)), kPi / 2); }

SymmetricState ghz_state(int n) {
    if (n < 1) throw DomainError("ghz_state: n must be positive");
    VectorXcd d = VectorXcd::Zero(n + 1);
    d[0] = 1.0;
    d[n] += 1.0;
    return SymmetricState(std::move(d));
}

Eigen::Matrix2cd rotation_unitary(const Star& axis, double angle) {
    const Vector3d& a = axis.vector();
    const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
    const Complex i(0.0, 1.0);
    Eigen::Matrix2cd u;
    u << c - i * s * a.z(), -i * s * Complex(a.x(), -a.y()),
        -i * s * Complex(a.x(), a.y()), c + i * s * a.z();
    return u;
}

SymmetricState apply_local_unitary(const SymmetricState& state, const Eigen::Matrix2cd& u) {
    // f(x, y) = sum_k a_k x^{n-k} y^k transforms as
    // f'(x, y) = f(u00 x + u10 y, u01 x + u11 y); coefficients indexed by y-degree.
    const int n = state.n();
    const VectorXcd a = state.majorana_coefficients();
    std::vector<VectorXcd> xpow(static_cast<std::size_t>(n + 1)), ypow(static_cast<std::size_t>(n + 1));
    xpow[0] = ypow[0] = VectorXcd::Ones(1);
    for (int j = 1; j <= n; ++j) {
        xpow[j] = VectorXcd::Zero(j + 1);
        ypow[j] = VectorXcd::Zero(j + 1);
        for (int t = 0; t < j; ++t) {
            xpow[j][t] += xpow[j - 1][t] * u(0, 0);
            xpow[j][t + 1] += xpow[j - 1][t] * u(1, 0);
            ypow[j][t] += ypow[j - 1][t] * u(0, 1);
            ypow[j][t + 1] += ypow[j - 1][t] * u(1, 1);
        }
    }
    VectorXcd out = VectorXcd::Zero(n + 1);
    for (int k = 0; k <= n; ++k) {
        if (a[k] == Complex(0.0)) continue;
        const VectorXcd& xp = xpow[n - k];
        const VectorXcd& yp = ypow[k];
        for (Eigen::Index i = 0; i < xp.size(); ++i)
            for (Eigen::Index j = 0; j < yp.size(); ++j) out[i + j] += a[k] * xp[i] * yp[j];
    }
    return SymmetricState::from_majorana_coefficients(out);
}

SymmetricState rotate_state(const SymmetricState& state, const Star& axis, double angle) {
    return apply_local_unitary(state, rotation_unitary(axis, angle));
}

Star rotate(const Star& s, const Star& axis, double angle) {
    return Star(Eigen::AngleAxisd(angle, axis.vector()) * s.vector());
}

Constellation rotate(const Constellation& c, const Star& axis, double angle) {
    std::vector<Star> out;
    out.reserve(static_cast<std::size_t>(c.n()));
    for (const auto& s : c.stars()) out.push_back(rotate(s, axis, angle));
    return Constellation(std::move(out));
}

}  // namespace stellar
