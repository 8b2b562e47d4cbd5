#ifndef ASN_GOF_HPP
#define ASN_GOF_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asn/distribution.hpp"
#include "asn/estimators.hpp"
#include "asn/ordered_sample.hpp"

namespace asn {

struct GofReport {
    double statistic;  // Kolmogorov-Smirnov D in [0, 1]
    double p_value;
    std::size_t n;
    Method method;
};

// Two-sided one-sample KS statistic against a fully specified model:
// D = max_i max(|i/n - F(t_(i))|, |F(t_(i)) - (i-1)/n|).
inline double ks_statistic(const OrderedSample& s, const AsnParams& p) {
    const std::size_t n = s.size();
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double f = cdf(p, s[i - 1]);
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
        d = std::max(d, std::abs(f - (static_cast<double>(i) - 1.0) / n));
    }
    return d;
}

// Asymptotic Kolmogorov p-value: p = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 n D^2),
// truncated once terms drop below 1e-12, clipped to [0, 1]. Note: when the
// parameters were estimated from the same data this p-value is biased upward.
inline double ks_pvalue(double d, std::size_t n) {
    if (!(d >= 0.0 && d <= 1.0) || n < 1)
        throw std::domain_error("ks_pvalue: need 0 <= D <= 1 and n >= 1");
    if (d == 0.0)
        return 1.0;
    const double x = 2.0 * n * d * d;
    double acc = 0.0;
    double sign = 1.0;
    for (std::size_t k = 1; k < 100000000; ++k) {
        const double term = std::exp(-x * static_cast<double>(k) * static_cast<double>(k));
        acc += sign * term;
        if (term < 1e-12)
            break;
        sign = -sign;
    }
    return std::clamp(2.0 * acc, 0.0, 1.0);
}

inline GofReport ks_test(const OrderedSample& s, const AsnParams& p, Method tag) {
    const double d = ks_statistic(s, p);
    return GofReport{d, ks_pvalue(d, s.size()), s.size(), tag};
}

}  // namespace asn

#endif  // ASN_GOF_HPP
