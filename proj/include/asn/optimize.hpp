#ifndef ASN_OPTIMIZE_HPP
#define ASN_OPTIMIZE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

// Derivative-free 3-d minimization plus central-difference derivatives.
// One simplex kernel serves all estimation objectives; analytic gradients
// exist elsewhere for verification only.

namespace asn {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;
using ObjectiveFn = std::function<double(const Vec3&)>;

struct OptimResult {
    Vec3 argmin{0.0, 0.0, 0.0};
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    int restarts = 0;
};

namespace detail {

// Non-finite evaluations become +inf so NaN can never enter the simplex
// ordering.
inline double guarded_eval(const ObjectiveFn& obj, const Vec3& x) {
    const double v = obj(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

struct Vertex {
    Vec3 x;
    double f;
};

inline double simplex_diameter(const std::array<Vertex, 4>& s) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int c = 0; c < 3; ++c)
                d = std::max(d, std::abs(s[i].x[c] - s[j].x[c]));
    return d;
}

// One Nelder-Mead run with the standard coefficients (reflection 1,
// expansion 2, contraction 0.5, shrink 0.5). Ordering is stable, so on a
// flat objective the start vertex stays ranked first and is returned
// unchanged.
inline OptimResult nelder_mead(const ObjectiveFn& obj, const Vec3& start, int max_iter,
                               double step_scale) {
    constexpr double kDiamTol = 1e-8;
    constexpr double kValueTol = 1e-10;

    std::array<Vertex, 4> s;
    s[0] = {start, guarded_eval(obj, start)};
    for (int i = 0; i < 3; ++i) {
        Vec3 x = start;
        x[i] += step_scale * std::max(1.0, std::abs(x[i]));
        s[i + 1] = {x, guarded_eval(obj, x)};
    }

    OptimResult res;
    res.iterations = 0;
    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

    for (int iter = 0; iter < max_iter; ++iter) {
        std::stable_sort(s.begin(), s.end(), by_value);
        if (simplex_diameter(s) <= kDiamTol && s[3].f - s[0].f <= kValueTol) {
            res.converged = true;
            break;
        }
        res.iterations = iter + 1;

        Vec3 centroid{0.0, 0.0, 0.0};
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < 3; ++c)
                centroid[c] += s[i].x[c] / 3.0;

        auto along = [&](double coef) {
            Vec3 x;
            for (int c = 0; c < 3; ++c)
                x[c] = centroid[c] + coef * (s[3].x[c] - centroid[c]);
            return x;
        };

        const Vec3 xr = along(-1.0);
        const double fr = guarded_eval(obj, xr);
        if (fr < s[0].f) {
            const Vec3 xe = along(-2.0);
            const double fe = guarded_eval(obj, xe);
            if (fe < fr)
                s[3] = {xe, fe};
            else
                s[3] = {xr, fr};
            continue;
        }
        if (fr < s[2].f) {
            s[3] = {xr, fr};
            continue;
        }
        // Contraction: outside if the reflected point improved on the
        // worst, inside otherwise.
        if (fr < s[3].f) {
            const Vec3 xc = along(-0.5);
            const double fc = guarded_eval(obj, xc);
            if (fc <= fr) {
                s[3] = {xc, fc};
                continue;
            }
        } else {
            const Vec3 xc = along(0.5);
            const double fc = guarded_eval(obj, xc);
            if (fc < s[3].f) {
                s[3] = {xc, fc};
                continue;
            }
        }
        // Shrink toward the best vertex.
        for (int i = 1; i < 4; ++i) {
            for (int c = 0; c < 3; ++c)
                s[i].x[c] = s[0].x[c] + 0.5 * (s[i].x[c] - s[0].x[c]);
            s[i].f = guarded_eval(obj, s[i].x);
        }
    }

    std::stable_sort(s.begin(), s.end(), by_value);
    if (!res.converged && simplex_diameter(s) <= kDiamTol && s[3].f - s[0].f <= kValueTol)
        res.converged = true;
    res.argmin = s[0].x;
    res.value = s[0].f;
    return res;
}

}  // namespace detail

// Simplex minimization, max 5000 iterations per pass, then one automatic
// restart from the incumbent. The restart simplex is an order of magnitude
// wider than the first: its job is to confirm the incumbent against nearby
// basins, not to re-polish it. Deterministic for a fixed start;
// non-convergence is reported through the flag, never an exception.
inline OptimResult minimize(const ObjectiveFn& obj, const Vec3& start) {
    constexpr int kMaxIter = 5000;
    OptimResult first = detail::nelder_mead(obj, start, kMaxIter, 0.05);
    OptimResult second = detail::nelder_mead(obj, first.argmin, kMaxIter, 0.5);
    OptimResult res = second.value <= first.value ? second : first;
    res.iterations = first.iterations + second.iterations;
    res.converged = second.converged;
    res.restarts = 1;
    return res;
}

// Central differences, step h_i = 1e-5 * max(1, |x_i|).
inline Vec3 numeric_gradient(const ObjectiveFn& obj, const Vec3& at) {
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(at[i]));
        Vec3 hi = at, lo = at;
        hi[i] += h;
        lo[i] -= h;
        const double fp = obj(hi), fm = obj(lo);
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw std::domain_error(
                "numeric_gradient: non-finite objective at stencil of coordinate " +
                std::to_string(i));
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// Central second differences, symmetrized as (H + H^T) / 2.
inline Mat3 numeric_hessian(const ObjectiveFn& obj, const Vec3& at) {
    Vec3 h;
    for (int i = 0; i < 3; ++i)
        h[i] = 1e-5 * std::max(1.0, std::abs(at[i]));

    auto eval = [&](int i, double si, int j, double sj) {
        Vec3 x = at;
        x[i] += si * h[i];
        x[j] += sj * h[j];
        const double f = obj(x);
        if (!std::isfinite(f))
            throw std::domain_error(
                "numeric_hessian: non-finite objective at stencil of coordinates " +
                std::to_string(i) + "," + std::to_string(j));
        return f;
    };

    const double f0 = obj(at);
    if (!std::isfinite(f0))
        throw std::domain_error("numeric_hessian: non-finite objective at center");

    Mat3 hess{};
    for (int i = 0; i < 3; ++i)
        hess[i][i] = (eval(i, 1, i, 0) - 2.0 * f0 + eval(i, -1, i, 0)) / (h[i] * h[i]);
    // cross terms land in both triangles at once, so H = (H + H^T) / 2 by
    // construction
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const double v = (eval(i, 1, j, 1) - eval(i, 1, j, -1) -
                              eval(i, -1, j, 1) + eval(i, -1, j, -1)) /
                             (4.0 * h[i] * h[j]);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    return hess;
}

}  // namespace asn

#endif  // ASN_OPTIMIZE_HPP
