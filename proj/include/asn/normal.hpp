#ifndef ASN_NORMAL_HPP
#define ASN_NORMAL_HPP

#include <cmath>

// Standard normal kernel. Both CDF tails go through erfc so that values far
// below 1e-12 keep full relative accuracy instead of cancelling against 1.

namespace asn {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438186847;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640561763986;
inline constexpr double kInvSqrt2 = 0.70710678118654752440084436210484903928;

inline double norm_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

// Exact in log space; never exponentiates, so phi(40) poses no problem.
inline double norm_log_pdf(double x) {
    return -0.5 * x * x - kLogSqrt2Pi;
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

// Upper tail 1 - Phi(x) without subtracting from 1.
inline double norm_cdf_upper(double x) {
    return 0.5 * std::erfc(x * kInvSqrt2);
}

}  // namespace asn

#endif  // ASN_NORMAL_HPP
