#ifndef ASN_PARAMS_HPP
#define ASN_PARAMS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace asn {

// Parameter triple (mu, sigma, alpha) of the alpha-skew normal family.
// sigma must be strictly positive; alpha = 0 recovers Normal(mu, sigma).
class AsnParams {
public:
    AsnParams(double mu, double sigma, double alpha)
        : mu_(mu), sigma_(sigma), alpha_(alpha) {
        if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(alpha))
            throw std::invalid_argument("AsnParams: parameters must be finite");
        if (sigma <= 0.0)
            throw std::invalid_argument("AsnParams: sigma must be > 0, got " +
                                        std::to_string(sigma));
    }

    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    double alpha() const { return alpha_; }

    bool operator==(const AsnParams& o) const {
        return mu_ == o.mu_ && sigma_ == o.sigma_ && alpha_ == o.alpha_;
    }

private:
    double mu_;
    double sigma_;
    double alpha_;
};

}  // namespace asn

#endif  // ASN_PARAMS_HPP
