#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "stellar/errors.hpp"

namespace stellar {

template <typename Real>
struct RootOptions {
    /// Target for |p(z)| / sum_j |c_j| |z|^j at every returned root.
    Real residual_tol = Real(1e-12);
    int max_iterations = 400;
    /// Collapse clusters that are numerically a single multiple root.
    bool polish_multiple_roots = true;
};

template <typename Real>
struct RootReport {
    std::vector<std::complex<Real>> roots;
    Real max_relative_residual = 0;
    int iterations = 0;
    int collapsed_clusters = 0;
};

namespace detail {

template <typename Real>
using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Diagonal similarity scaling with powers of two (Parlett-Reinsch).
template <typename Real>
void balance(CMat<Real>& a) {
    constexpr Real radix = 2;
    constexpr Real radix_sq = radix * radix;
    const Eigen::Index n = a.rows();
    bool done = false;
    for (int sweep = 0; !done && sweep < 100; ++sweep) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            Real c = 0, r = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0 || r == 0) continue;
            const Real s = c + r;
            Real f = 1;
            Real g = r / radix;
            while (c < g) {
                f *= radix;
                c *= radix_sq;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix_sq;
            }
            if ((c + r) / f < Real(0.95) * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

/// Eigenvalues of the balanced companion matrix of sum_j c[j] z^j (c ascending).
template <typename Real>
std::vector<std::complex<Real>> companion_roots(std::span<const std::complex<Real>> c) {
    const int d = static_cast<int>(c.size()) - 1;
    CMat<Real> comp = CMat<Real>::Zero(d, d);
    for (int j = 0; j < d; ++j) comp(0, j) = -c[d - 1 - j] / c[d];
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1;
    balance<Real>(comp);
    Eigen::ComplexEigenSolver<CMat<Real>> solver(comp, false);
    if (solver.info() != Eigen::Success) throw NumericError("companion_roots: eigensolver failed");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

/// Horner evaluation of p and p' together with sum_j |c_j| |z|^j.
template <typename Real>
void horner(std::span<const std::complex<Real>> c, std::complex<Real> z, std::complex<Real>& p,
            std::complex<Real>& dp, Real& magnitude) {
    const Real az = std::abs(z);
    p = c.back();
    dp = 0;
    magnitude = std::abs(c.back());
    for (std::size_t j = c.size() - 1; j-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[j];
        magnitude = magnitude * az + std::abs(c[j]);
    }
}

/// p(z) and its Newton correction, evaluated in whichever chart keeps |z| <= 1.
template <typename Real>
struct ChartValue {
    std::complex<Real> newton;  // p(z) / p'(z)
    Real relative_residual;
};

template <typename Real>
ChartValue<Real> evaluate(std::span<const std::complex<Real>> c,
                          std::span<const std::complex<Real>> reversed, std::complex<Real> z) {
    using C = std::complex<Real>;
    C p, dp;
    Real mag;
    if (std::abs(z) <= 1) {
        horner<Real>(c, z, p, dp, mag);
        const Real res = mag > 0 ? std::abs(p) / mag : 0;
        if (dp == C(0)) return {C(0), res};
        return {p / dp, res};
    }
    // p(z) = z^d q(1/z); p'/p = y (d - y q'(y)/q(y)) with y = 1/z.
    const C y = Real(1) / z;
    const Real d = static_cast<Real>(c.size() - 1);
    horner<Real>(reversed, y, p, dp, mag);
    const Real res = mag > 0 ? std::abs(p) / mag : 0;
    const C denom = y * (d * p - y * dp);
    if (denom == C(0)) return {C(0), res};
    return {p / denom, res};
}

template <typename Real>
Real chordal(std::complex<Real> a, std::complex<Real> b) {
    return 2 * std::abs(a - b) / std::sqrt((1 + std::norm(a)) * (1 + std::norm(b)));
}

/// j-th derivative divided by j! (Taylor coefficient) at z, with its rounding bound.
template <typename Real>
void taylor_coefficient(std::span<const std::complex<Real>> c, std::complex<Real> z, int j,
                        std::complex<Real>& value, Real& bound) {
    const int d = static_cast<int>(c.size()) - 1;
    value = 0;
    bound = 0;
    const Real az = std::abs(z);
    for (int i = d; i >= j; --i) {
        Real binom = 1;
        for (int t = 1; t <= j; ++t) binom = binom * (i - j + t) / t;
        value = value * z + c[i] * binom;
        bound = bound * az + std::abs(c[i]) * binom;
    }
}

/// Newton iteration for a simple root of the m-th Taylor coefficient, which
/// locates an (m+1)-fold root of p far more accurately than a cluster mean.
template <typename Real>
std::complex<Real> refine_multiple(std::span<const std::complex<Real>> c, std::complex<Real> z,
                                   int m) {
    using C = std::complex<Real>;
    for (int it = 0; it < 20; ++it) {
        C f, df;
        Real bf, bdf;
        taylor_coefficient<Real>(c, z, m, f, bf);
        taylor_coefficient<Real>(c, z, m + 1, df, bdf);
        if (df == C(0)) break;
        // d/dz [p^(m)/m!] = (m+1) p^(m+1)/(m+1)!
        const C step = f / (Real(m + 1) * df);
        z -= step;
        if (std::abs(step) <= std::numeric_limits<Real>::epsilon() * std::max(Real(1), std::abs(z)))
            break;
    }
    return z;
}

}  // namespace detail

/// All roots of p(z) = sum_j c[j] z^j. Requires c.back() != 0; exact zero
/// low-order coefficients produce exact zero roots.
template <typename Real>
RootReport<Real> polynomial_roots(std::span<const std::complex<Real>> coefficients,
                                  const RootOptions<Real>& options = {}) {
    using C = std::complex<Real>;
    constexpr Real eps = std::numeric_limits<Real>::epsilon();
    if (coefficients.empty() || coefficients.back() == C(0))
        throw DomainError("polynomial_roots: leading coefficient is zero");

    RootReport<Real> report;
    std::size_t zeros = 0;
    while (zeros < coefficients.size() - 1 && coefficients[zeros] == C(0)) ++zeros;
    report.roots.assign(zeros, C(0));

    std::vector<C> c(coefficients.begin() + static_cast<std::ptrdiff_t>(zeros), coefficients.end());
    const int d = static_cast<int>(c.size()) - 1;
    if (d == 0) return report;

    Real scale = 0;
    for (const C& x : c) scale = std::max(scale, std::abs(x));
    for (C& x : c) x /= scale;
    std::vector<C> reversed(c.rbegin(), c.rend());

    std::vector<C> z;
    if (d == 1) {
        z = {-c[0] / c[1]};
    } else if (std::abs(c[0]) > std::abs(c[d])) {
        z = detail::companion_roots<Real>(reversed);
        for (C& r : z) r = (r == C(0)) ? C(1 / eps) : Real(1) / r;
    } else {
        z = detail::companion_roots<Real>(c);
    }

    // Aberth-Ehrlich, Gauss-Seidel style.
    std::vector<bool> done(static_cast<std::size_t>(d), d == 1);
    const Real stop = std::min(options.residual_tol, Real(4) * d * eps);
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        bool all_done = true;
        for (int i = 0; i < d; ++i) {
            if (done[i]) continue;
            const auto v = detail::evaluate<Real>(c, reversed, z[i]);
            if (v.relative_residual <= stop) {
                done[i] = true;
                continue;
            }
            all_done = false;
            C sum = 0;
            for (int j = 0; j < d; ++j)
                if (j != i) sum += Real(1) / (z[i] - z[j]);
            const C step = v.newton / (Real(1) - v.newton * sum);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if (std::abs(step) <= eps * std::abs(z[i])) done[i] = true;
        }
        if (all_done) break;
    }
    report.iterations = it;

    std::vector<bool> collapsed(static_cast<std::size_t>(d), false);
    if (options.polish_multiple_roots && d > 1) {
        // Weierstrass-type inclusion radii, mapped to chordal distance.
        std::vector<Real> radius(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            const bool inner = std::abs(z[i]) <= 1;
            const C zi = inner ? z[i] : Real(1) / z[i];
            C p, dp;
            Real mag;
            detail::horner<Real>(inner ? std::span<const C>(c) : std::span<const C>(reversed), zi, p,
                                 dp, mag);
            C denom = inner ? c[d] : c[0];
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                const C zj = inner ? z[j] : Real(1) / z[j];
                denom *= (zi - zj);
            }
            // The coefficients are only known to ~d eps, so the pseudo-zero
            // neighbourhood is driven by that backward error, not by |p|.
            const Real uncertainty = std::abs(p) + Real(8) * d * eps * mag;
            const Real w = denom == C(0) ? std::numeric_limits<Real>::infinity()
                                         : uncertainty / std::abs(denom);
            radius[i] = std::max(Real(2) * d * w / (1 + std::norm(zi)), Real(16) * eps);
        }
        std::vector<int> parent(static_cast<std::size_t>(d));
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                if (detail::chordal(z[i], z[j]) <= radius[i] + radius[j]) parent[find(i)] = find(j);

        // Collapse a group onto one multiple root if the refined center makes
        // the first m Taylor coefficients vanish to rounding level.
        auto collapse = [&](const std::vector<int>& members, C& root) {
            const int m = static_cast<int>(members.size());
            C mean = 0;
            for (int i : members) mean += z[i];
            mean /= Real(m);
            const bool inner = std::abs(mean) <= 1;
            const std::span<const C> chart = inner ? std::span<const C>(c) : std::span<const C>(reversed);
            C center = 0;
            if (inner) {
                center = mean;
            } else {
                for (int i : members) center += Real(1) / z[i];
                center /= Real(m);
            }
            center = detail::refine_multiple<Real>(chart, center, m - 1);
            if (!std::isfinite(center.real()) || !std::isfinite(center.imag())) return false;
            for (int j = 0; j < m; ++j) {
                C value;
                Real bound;
                detail::taylor_coefficient<Real>(chart, center, j, value, bound);
                if (std::abs(value) > Real(32) * d * eps * bound) return false;
            }
            root = inner ? center : Real(1) / center;
            return true;
        };

        std::vector<std::vector<int>> clusters(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) clusters[find(i)].push_back(i);
        for (const auto& members : clusters) {
            const int m = static_cast<int>(members.size());
            if (m < 2) continue;
            C root;
            if (collapse(members, root)) {
                for (int i : members) z[i] = root, collapsed[i] = true;
                ++report.collapsed_clusters;
                continue;
            }
            // The inclusion radii of a tight group are inflated by its own
            // members, so unrelated roots can be swept in. Try every group
            // formed while linking members nearest first.
            std::vector<std::pair<Real, std::pair<int, int>>> edges;
            for (int a = 0; a < m; ++a)
                for (int b = a + 1; b < m; ++b)
                    edges.push_back({detail::chordal(z[members[a]], z[members[b]]), {a, b}});
            std::sort(edges.begin(), edges.end());
            std::vector<std::vector<int>> group(static_cast<std::size_t>(m));
            std::vector<int> owner(static_cast<std::size_t>(m));
            for (int a = 0; a < m; ++a) group[a] = {a}, owner[a] = a;
            std::vector<std::pair<std::vector<int>, C>> accepted;
            for (const auto& e : edges) {
                int ga = owner[e.second.first], gb = owner[e.second.second];
                if (ga == gb) continue;
                if (group[ga].size() < group[gb].size()) std::swap(ga, gb);
                for (int x : group[gb]) owner[x] = ga, group[ga].push_back(x);
                group[gb].clear();
                if (static_cast<int>(group[ga].size()) == m) break;
                std::vector<int> subset;
                for (int x : group[ga]) subset.push_back(members[x]);
                if (collapse(subset, root)) accepted.push_back({std::move(subset), root});
            }
            // Groups are nested, so later (larger) ones supersede earlier ones.
            std::vector<int> last(static_cast<std::size_t>(d), -1);
            for (std::size_t g = 0; g < accepted.size(); ++g)
                for (int i : accepted[g].first) last[i] = static_cast<int>(g);
            for (std::size_t g = 0; g < accepted.size(); ++g) {
                bool kept = false;
                for (int i : accepted[g].first)
                    if (last[i] == static_cast<int>(g)) z[i] = accepted[g].second, collapsed[i] = kept = true;
                if (kept) ++report.collapsed_clusters;
            }
        }
    }

    // Final Aberth sweeps with the residual evaluated in extended precision;
    // near-coincident simple roots lose most of their accuracy to rounding in p(z).
    if constexpr (sizeof(long double) > sizeof(Real)) {
        using L = std::complex<long double>;
        std::vector<L> cl(c.begin(), c.end()), rl(reversed.begin(), reversed.end());
        for (int sweep = 0; sweep < 2 && d > 1; ++sweep)
            for (int i = 0; i < d; ++i) {
                if (collapsed[i]) continue;
                const L zi(z[i]);
                const L newton = detail::evaluate<long double>(cl, rl, zi).newton;
                L sum = 0;
                for (int j = 0; j < d; ++j)
                    if (j != i && z[j] != z[i]) sum += 1.0L / (zi - L(z[j]));
                const L step = newton / (1.0L - newton * sum);
                if (std::isfinite(step.real()) && std::isfinite(step.imag()) &&
                    std::abs(step) < Real(1e-6) * std::max(Real(1), std::abs(z[i])))
                    z[i] = C(zi - step);
            }
    }

    for (const C& r : z) {
        report.max_relative_residual = std::max(
            report.max_relative_residual, detail::evaluate<Real>(c, reversed, r).relative_residual);
        report.roots.push_back(r);
    }
    return report;
}

/// Coefficients (ascending) of prod_i (z - r_i).
template <typename Real>
std::vector<std::complex<Real>> polynomial_from_roots(std::span<const std::complex<Real>> roots) {
    std::vector<std::complex<Real>> c{std::complex<Real>(1)};
    for (const auto& r : roots) {
        c.push_back(0);
        for (std::size_t j = c.size() - 1; j > 0; --j) c[j] = c[j - 1] - r * c[j];
        c[0] = -r * c[0];
    }
    return c;
}

}  // namespace stellar
