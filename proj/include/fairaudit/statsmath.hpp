#pragma once

#include "fairaudit/errors.hpp"

namespace fairaudit {

// A probability value, validated to lie in [0, 1].
class Probability {
public:
    explicit Probability(double value);

    double value() const noexcept { return value_; }

private:
    double value_;
};

// Standard normal CDF Phi(x).
//
// Computed from the complementary error function: a power series for small
// arguments and a continued fraction for the tails, giving near machine
// precision everywhere. Throws ValidationError on non-finite input.
double normal_cdf(double x);

// Standard normal density phi(x).
double normal_pdf(double x);

// Standard normal quantile Phi^-1(p) for p in (0, 1).
//
// Acklam's rational approximation refined by one Newton step against
// normal_cdf; the round trip |normal_cdf(normal_quantile(p)) - p| stays
// below 1e-10 across (1e-6, 1 - 1e-6). Throws ValidationError for
// p outside the open interval (the quantile is infinite at the endpoints).
double normal_quantile(double p);

} // namespace fairaudit
