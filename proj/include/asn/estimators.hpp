#ifndef ASN_ESTIMATORS_HPP
#define ASN_ESTIMATORS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asn/distribution.hpp"
#include "asn/optimize.hpp"
#include "asn/ordered_sample.hpp"

// The seven estimation methods as objective constructions over an
// OrderedSample, plus the shared fit pipeline initialize -> minimize ->
// diagnose. Every method is phrased as a minimization; MLE and MPS enter
// negated. The per-method nonlinear estimating equations are not the
// solution path here; the analytic gradients below exist so tests can hold
// them against finite differences.

namespace asn {

enum class Method { mle, lsq, wlq, mps, cme, ade, rade };

inline constexpr std::array<Method, 7> all_methods{
    Method::mle, Method::lsq, Method::wlq, Method::mps,
    Method::cme, Method::ade, Method::rade};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::mle: return "MLE";
        case Method::lsq: return "LSQ";
        case Method::wlq: return "WLQ";
        case Method::mps: return "MPS";
        case Method::cme: return "CME";
        case Method::ade: return "ADE";
        case Method::rade: return "RADE";
    }
    return "?";
}

inline Method parse_method(const std::string& name) {
    for (Method m : all_methods)
        if (name == method_name(m))
            return m;
    throw std::invalid_argument("unknown method: " + name);
}

// ---------------------------------------------------------------------------
// Likelihood

inline double neg_log_likelihood(const OrderedSample& s, const AsnParams& p) {
    double acc = 0.0;
    for (double t : s.values())
        acc -= log_pdf(p, t);
    return acc;
}

// Analytic gradient of the log-likelihood. Rederived from the likelihood
// itself rather than transcribed: the commonly printed sigma equation drops
// the -n term and the alpha equation shows 2 n a / (1 + a^2) where the
// likelihood gives 2 n a / (2 + a^2). Both corrections are pinned against
// finite differences in the tests.
inline Vec3 score(const OrderedSample& s, const AsnParams& p) {
    const double a = p.alpha();
    const double n = static_cast<double>(s.size());
    double sum_ratio = 0.0;       // sum 2a(1-az) / ((1-az)^2+1)
    double sum_ratio_z = 0.0;     // sum 2az(1-az) / ((1-az)^2+1)
    double sum_ratio_alpha = 0.0; // sum 2z(1-az) / ((1-az)^2+1)
    double sum_z = 0.0;
    double sum_z2 = 0.0;
    for (double t : s.values()) {
        const double z = standardize(p, t);
        const double u = 1.0 - a * z;
        const double den = u * u + 1.0;
        sum_ratio += 2.0 * a * u / den;
        sum_ratio_z += 2.0 * a * z * u / den;
        sum_ratio_alpha += 2.0 * z * u / den;
        sum_z += z;
        sum_z2 += z * z;
    }
    Vec3 g;
    g[0] = (sum_ratio + sum_z) / p.sigma();
    g[1] = (sum_ratio_z - n + sum_z2) / p.sigma();
    g[2] = -sum_ratio_alpha - 2.0 * n * a / (2.0 + a * a);
    return g;
}

// ---------------------------------------------------------------------------
// Minimum-distance objectives. All use 1-based order-statistic indices i.

inline double lsq_objective(const OrderedSample& s, const AsnParams& p) {
    const std::size_t n = s.size();
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double r = cdf(p, s[i - 1]) - static_cast<double>(i) / (n + 1.0);
        acc += r * r;
    }
    return acc;
}

inline double wlq_objective(const OrderedSample& s, const AsnParams& p) {
    const std::size_t n = s.size();
    const double np1 = n + 1.0;
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double w = np1 * np1 * (n + 2.0) /
                         (static_cast<double>(i) * (n - i + 1.0));
        const double r = cdf(p, s[i - 1]) - static_cast<double>(i) / np1;
        acc += w * r * r;
    }
    return acc;
}

inline double cme_objective(const OrderedSample& s, const AsnParams& p) {
    const std::size_t n = s.size();
    double acc = 1.0 / (12.0 * n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double r = cdf(p, s[i - 1]) - (2.0 * i - 1.0) / (2.0 * n);
        acc += r * r;
    }
    return acc;
}

// Spacings and tail log-arguments are clamped below at 1e-300 before the
// log; a clamp means the parameters push an observation into a region the
// model gives essentially zero mass, which the caller may want to know.
inline constexpr double kLogClamp = 1e-300;

namespace detail {
inline double clamped_log(double v, int* clamp_count) {
    if (v < kLogClamp) {
        if (clamp_count) ++*clamp_count;
        v = kLogClamp;
    }
    return std::log(v);
}
}  // namespace detail

// Negated Cheng-Amin log spacing mean: -(1/(n+1)) sum log D_i, with
// D_1 = F(t_(1)) and D_(n+1) = S(t_(n)). Within a tie run the zero spacing
// is replaced by the density at the tied value.
inline double mps_objective(const OrderedSample& s, const AsnParams& p,
                            int* clamp_count = nullptr) {
    const std::size_t n = s.size();
    double acc = detail::clamped_log(cdf(p, s[0]), clamp_count);
    for (std::size_t i = 2; i <= n; ++i) {
        const double d = s.tied_with_previous(i - 1)
                             ? pdf(p, s[i - 1])
                             : cdf(p, s[i - 1]) - cdf(p, s[i - 2]);
        acc += detail::clamped_log(d, clamp_count);
    }
    acc += detail::clamped_log(survival(p, s[n - 1]), clamp_count);
    return -acc / (n + 1.0);
}

inline double ade_objective(const OrderedSample& s, const AsnParams& p,
                            int* clamp_count = nullptr) {
    const std::size_t n = s.size();
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double lf = detail::clamped_log(cdf(p, s[i - 1]), clamp_count);
        const double ls = detail::clamped_log(survival(p, s[n - i]), clamp_count);
        acc += (2.0 * i - 1.0) * (lf + ls);
    }
    return -static_cast<double>(n) - acc / n;
}

inline double rade_objective(const OrderedSample& s, const AsnParams& p,
                             int* clamp_count = nullptr) {
    const std::size_t n = s.size();
    double sum_f = 0.0;
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        sum_f += cdf(p, s[i - 1]);
        acc += (2.0 * i - 1.0) * detail::clamped_log(survival(p, s[n - i]), clamp_count);
    }
    return 0.5 * n - 2.0 * sum_f - acc / n;
}

inline double method_objective(Method m, const OrderedSample& s, const AsnParams& p,
                               int* clamp_count = nullptr) {
    switch (m) {
        case Method::mle: return neg_log_likelihood(s, p);
        case Method::lsq: return lsq_objective(s, p);
        case Method::wlq: return wlq_objective(s, p);
        case Method::mps: return mps_objective(s, p, clamp_count);
        case Method::cme: return cme_objective(s, p);
        case Method::ade: return ade_objective(s, p, clamp_count);
        case Method::rade: return rade_objective(s, p, clamp_count);
    }
    throw std::logic_error("method_objective: unreachable");
}

// ---------------------------------------------------------------------------
// Chain-rule gradients of the squared-distance objectives, built from the
// Delta_j CDF derivatives. Diagnostics only; the fit pipeline never uses
// them.

inline Vec3 lsq_gradient(const OrderedSample& s, const AsnParams& p) {
    const std::size_t n = s.size();
    Vec3 g{0.0, 0.0, 0.0};
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = s[i - 1];
        const double r = cdf(p, t) - static_cast<double>(i) / (n + 1.0);
        g[0] += 2.0 * r * delta1(p, t);
        g[1] += 2.0 * r * delta2(p, t);
        g[2] += 2.0 * r * delta3(p, t);
    }
    return g;
}

inline Vec3 wlq_gradient(const OrderedSample& s, const AsnParams& p) {
    const std::size_t n = s.size();
    const double np1 = n + 1.0;
    Vec3 g{0.0, 0.0, 0.0};
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = s[i - 1];
        const double w = np1 * np1 * (n + 2.0) /
                         (static_cast<double>(i) * (n - i + 1.0));
        const double r = cdf(p, t) - static_cast<double>(i) / np1;
        g[0] += 2.0 * w * r * delta1(p, t);
        g[1] += 2.0 * w * r * delta2(p, t);
        g[2] += 2.0 * w * r * delta3(p, t);
    }
    return g;
}

inline Vec3 cme_gradient(const OrderedSample& s, const AsnParams& p) {
    const std::size_t n = s.size();
    Vec3 g{0.0, 0.0, 0.0};
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = s[i - 1];
        const double r = cdf(p, t) - (2.0 * i - 1.0) / (2.0 * n);
        g[0] += 2.0 * r * delta1(p, t);
        g[1] += 2.0 * r * delta2(p, t);
        g[2] += 2.0 * r * delta3(p, t);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Initialization: moment start plus alpha grid search.

// Moment start (mu~, sigma~) with sigma~ the population standard deviation;
// alpha~ minimizes the method objective over the grid -10, -9.5, ..., 10.
// Grid ties break toward smaller |alpha|.
inline AsnParams initialize(const OrderedSample& s, Method method) {
    const std::size_t n = s.size();
    if (n < 4)
        throw std::invalid_argument("initialize: need at least 4 observations");

    double mean = 0.0;
    for (double v : s.values())
        mean += v;
    mean /= static_cast<double>(n);

    double var = 0.0;
    for (double v : s.values())
        var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (var <= 0.0)
        throw std::domain_error("initialize: degenerate sample (zero variance)");
    const double sd = std::sqrt(var);

    double best_alpha = 0.0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int gi = 0; gi <= 40; ++gi) {
        const double a = -10.0 + 0.5 * gi;
        double v = method_objective(method, s, AsnParams(mean, sd, a));
        if (!std::isfinite(v))
            v = std::numeric_limits<double>::infinity();
        const bool better =
            v < best_value ||
            (v == best_value && (std::abs(a) < std::abs(best_alpha) ||
                                 (std::abs(a) == std::abs(best_alpha) && a < best_alpha)));
        if (better) {
            best_value = v;
            best_alpha = a;
        }
    }
    return AsnParams(mean, sd, best_alpha);
}

// ---------------------------------------------------------------------------
// Fit pipeline.

struct FitResult {
    AsnParams params;
    Method method;
    double objective;
    bool converged;
    int iterations;
    std::optional<Vec3> std_errors;  // MLE / MPS only, and only when the
                                     // observed information is positive definite
    AsnParams init;
    int clamped_terms;  // clamped log evaluations at the final parameters
};

namespace detail {

// Inverse of a symmetric positive definite 3x3 via the adjugate;
// positive definiteness checked through leading principal minors.
inline std::optional<Mat3> spd_inverse(const Mat3& m) {
    const double m1 = m[0][0];
    const double m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (!(m1 > 0.0) || !(m2 > 0.0) || !(det > 0.0))
        return std::nullopt;
    Mat3 inv;
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = inv[0][1];
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = inv[0][2];
    inv[2][1] = inv[1][2];
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

inline std::optional<Vec3> observed_info_std_errors(Method method,
                                                    const OrderedSample& s,
                                                    const AsnParams& at) {
    ObjectiveFn natural = [&](const Vec3& x) {
        if (!(x[1] > 0.0) || !std::isfinite(x[0]) || !std::isfinite(x[1]) ||
            !std::isfinite(x[2]))
            return std::numeric_limits<double>::infinity();
        return method_objective(method, s, AsnParams(x[0], x[1], x[2]));
    };
    Mat3 hess;
    try {
        hess = numeric_hessian(natural, {at.mu(), at.sigma(), at.alpha()});
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    const auto inv = spd_inverse(hess);
    if (!inv)
        return std::nullopt;
    Vec3 se;
    for (int i = 0; i < 3; ++i) {
        if (!((*inv)[i][i] > 0.0))
            return std::nullopt;
        se[i] = std::sqrt((*inv)[i][i]);
    }
    return se;
}

}  // namespace detail

// Minimize the method objective from an explicit start. sigma is optimized
// as s = log(sigma), which keeps the simplex unconstrained and the returned
// scale strictly positive.
inline FitResult fit(const OrderedSample& sample, Method method, const AsnParams& start) {
    if (sample.size() < 4)
        throw std::invalid_argument("fit: need at least 4 observations");

    ObjectiveFn obj = [&](const Vec3& x) {
        if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(x[2]))
            return std::numeric_limits<double>::infinity();
        const double sg = std::exp(x[1]);
        if (!std::isfinite(sg) || sg <= 0.0)
            return std::numeric_limits<double>::infinity();
        return method_objective(method, sample, AsnParams(x[0], sg, x[2]));
    };

    const Vec3 x0{start.mu(), std::log(start.sigma()), start.alpha()};
    const OptimResult opt = minimize(obj, x0);

    const AsnParams at(opt.argmin[0], std::exp(opt.argmin[1]), opt.argmin[2]);
    int clamps = 0;
    const double value = method_objective(method, sample, at, &clamps);

    std::optional<Vec3> se;
    if (opt.converged && (method == Method::mle || method == Method::mps))
        se = detail::observed_info_std_errors(method, sample, at);

    return FitResult{at, method, value, opt.converged, opt.iterations,
                     se, start, clamps};
}

inline FitResult fit(const OrderedSample& sample, Method method) {
    return fit(sample, method, initialize(sample, method));
}

}  // namespace asn

#endif  // ASN_ESTIMATORS_HPP
