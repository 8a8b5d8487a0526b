#include "fairaudit/statsmath.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fairaudit {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794; // 1/sqrt(2*pi)
constexpr double kTwoOverSqrtPi = 1.1283791670955125739; // 2/sqrt(pi)

// erf(z) for 0 <= z <= 2 via the confluent hypergeometric series
//   erf(z) = (2/sqrt(pi)) z e^{-z^2} sum_{n>=0} (2 z^2)^n / (1*3*...*(2n+1)).
// All terms are positive, so there is no cancellation.
double erf_series(double z) {
    const double z2 = z * z;
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 200; ++n) {
        term *= 2.0 * z2 / (2.0 * n + 1.0);
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return kTwoOverSqrtPi * z * std::exp(-z2) * sum;
}

// erfc(z) for z >= 2 via the Lentz continued fraction
//   erfc(z) = e^{-z^2}/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))).
double erfc_fraction(double z) {
    const double tiny = 1e-300;
    double f = z;
    double c = f;
    double d = 0.0;
    for (int n = 1; n < 300; ++n) {
        const double a = 0.5 * n;
        d = z + a * d;
        if (d == 0.0) d = tiny;
        c = z + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-z * z) / (1.7724538509055160273 * f); // sqrt(pi)
}

// Complementary error function, accurate in both tails.
double erfc_impl(double z) {
    if (z < 0.0) return 2.0 - erfc_impl(-z);
    if (z < 2.0) return 1.0 - erf_series(z);
    if (z > 27.5) return 0.0; // below the smallest positive double
    return erfc_fraction(z);
}

// Acklam's rational approximation to the normal quantile (relative error
// below 1.2e-9 on (0,1)); used as the Newton starting point.
double acklam_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// One Newton step against the lower-tail CDF. Only called for p <= 0.5,
// where Phi(x) is computed without cancellation.
double refined_lower_quantile(double p) {
    double x = acklam_quantile(p);
    const double cdf = normal_cdf(x);
    const double pdf = normal_pdf(x);
    if (pdf > 0.0) x -= (cdf - p) / pdf;
    return x;
}

} // namespace

Probability::Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ValidationError("probability must lie in [0, 1], got " +
                              std::to_string(value));
    }
}

double normal_cdf(double x) {
    if (!std::isfinite(x)) {
        throw ValidationError("normal_cdf requires a finite argument");
    }
    return 0.5 * erfc_impl(-x / kSqrt2);
}

double normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ValidationError("normal_quantile requires p in the open interval "
                              "(0, 1), got " + std::to_string(p));
    }
    if (p == 0.5) return 0.0;
    // Work in the lower tail so the Newton residual keeps full precision.
    if (p > 0.5) return -refined_lower_quantile(1.0 - p);
    return refined_lower_quantile(p);
}

} // namespace fairaudit
