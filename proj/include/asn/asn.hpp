#ifndef ASN_ASN_HPP
#define ASN_ASN_HPP

// Umbrella header.

#include "asn/distribution.hpp"
#include "asn/estimators.hpp"
#include "asn/gof.hpp"
#include "asn/montecarlo.hpp"
#include "asn/optimize.hpp"
#include "asn/ordered_sample.hpp"
#include "asn/timeseries.hpp"

#endif  // ASN_ASN_HPP
