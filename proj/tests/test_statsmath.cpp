#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairaudit/statsmath.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace fairaudit;

// Independent high-precision reference, kept apart from the library path:
// an alternating Maclaurin erf series and a long double continued fraction,
// plus externally computed anchor values.
namespace reference {

long double erf_maclaurin(long double z) {
    // erf(z) = 2/sqrt(pi) * sum (-1)^n z^(2n+1) / (n! (2n+1)); fine for |z| <= 2.5
    const long double two_over_sqrt_pi = 1.128379167095512573896L;
    long double term = z;
    long double sum = z;
    for (int n = 1; n < 120; ++n) {
        term *= -z * z / n;
        sum += term / (2 * n + 1);
        if (std::fabs(term) < 1e-25L * std::fabs(sum)) break;
    }
    return two_over_sqrt_pi * sum;
}

long double erfc_lentz(long double z) {
    const long double sqrt_pi = 1.772453850905516027298L;
    const long double tiny = 1e-300L;
    long double f = z, c = f, d = 0.0L;
    for (int n = 1; n < 400; ++n) {
        const long double a = 0.5L * n;
        d = z + a * d;
        if (d == 0.0L) d = tiny;
        c = z + a / c;
        if (c == 0.0L) c = tiny;
        d = 1.0L / d;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-21L) break;
    }
    return std::exp(-z * z) / (sqrt_pi * f);
}

double phi(double x) {
    const long double z = -static_cast<long double>(x) / 1.414213562373095048802L;
    long double erfc_z;
    if (z >= 2.5L) {
        erfc_z = erfc_lentz(z);
    } else if (z <= -2.5L) {
        erfc_z = 2.0L - erfc_lentz(-z);
    } else {
        erfc_z = 1.0L - erf_maclaurin(z);
    }
    return static_cast<double>(0.5L * erfc_z);
}

// Bisection of normal_cdf, the quantile oracle.
double quantile_by_bisection(double p) {
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (normal_cdf(mid) < p) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace reference

TEST_CASE("normal_cdf matches the high-precision reference") {
    // Anchors computed independently at 30-digit precision.
    const struct { double x, phi; } anchors[] = {
        {-6, 9.865876450376981407009e-10},
        {-4, 0.00003167124183311992125377},
        {-2.5, 0.006209665325776135166978},
        {-1.959963984540054, 0.02500000000000001376525},
        {-1, 0.1586552539314570514148},
        {-0.5, 0.3085375387259868963623},
        {-0.1, 0.4601721627229710185346},
        {0.1, 0.5398278372770289814654},
        {0.5, 0.6914624612740131036377},
        {1, 0.8413447460685429485852},
        {1.5, 0.9331927987311419339955},
        {1.959963984540054, 0.9749999999999999862347},
        {2.5, 0.993790334674223864833},
        {4, 0.9999683287581668800787},
        {6, 0.9999999990134123549623},
        {8, 0.9999999999999993779039},
    };
    for (const auto& a : anchors) {
        CAPTURE(a.x);
        CHECK(std::fabs(normal_cdf(a.x) - a.phi) < 1e-15);
    }
    for (double x = -6.0; x <= 6.0; x += 0.0625) {
        CAPTURE(x);
        CHECK(std::fabs(normal_cdf(x) - reference::phi(x)) < 1e-13);
    }
}

TEST_CASE("normal_cdf symmetry and trivial values") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(std::fabs(normal_cdf(10.0) - 1.0) < 1e-10);
    CHECK(std::fabs(normal_cdf(1.959964) - 0.975) < 1e-6);
    for (double x = 0.25; x <= 8.0; x += 0.25) {
        CHECK(std::fabs(normal_cdf(x) + normal_cdf(-x) - 1.0) < 1e-15);
    }
}

TEST_CASE("normal_cdf is monotone nondecreasing") {
    double prev = normal_cdf(-12.0);
    for (double x = -11.9; x <= 12.0; x += 0.1) {
        const double cur = normal_cdf(x);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("normal_cdf rejects non-finite input") {
    CHECK_THROWS_AS(normal_cdf(std::numeric_limits<double>::quiet_NaN()),
                    ValidationError);
    CHECK_THROWS_AS(normal_cdf(std::numeric_limits<double>::infinity()),
                    ValidationError);
    CHECK_THROWS_AS(normal_cdf(-std::numeric_limits<double>::infinity()),
                    ValidationError);
}

TEST_CASE("normal_quantile hits the frozen reference points") {
    CHECK(normal_quantile(0.5) == 0.0);
    // Bisection-oracle values, also pinned to independently computed digits.
    CHECK(std::fabs(normal_quantile(0.975) - 1.959963984540054) < 1e-10);
    CHECK(std::fabs(normal_quantile(0.8) - 0.8416212335729142) < 1e-10);
    CHECK(std::fabs(normal_quantile(0.975) - 1.959964) < 1e-6);
    CHECK(std::fabs(normal_quantile(0.8) - 0.841621) < 1e-6);
    CHECK(std::fabs(normal_quantile(0.25) + 0.6744897501960817) < 1e-10);

    for (const double p : {0.001, 0.025, 0.1, 0.33, 0.5, 0.66, 0.9, 0.975, 0.999}) {
        CAPTURE(p);
        CHECK(std::fabs(normal_quantile(p) - reference::quantile_by_bisection(p)) <
              1e-8);
    }
}

TEST_CASE("normal_quantile round trip stays within 1e-10") {
    // Dense grid covering (1e-6, 1 - 1e-6): linear core plus log-spaced tails.
    std::vector<double> grid;
    for (double p = 1e-6; p < 1e-2; p *= 1.35) {
        grid.push_back(p);
        grid.push_back(1.0 - p);
    }
    for (int i = 1; i < 1000; ++i) grid.push_back(i / 1000.0);
    for (const double p : grid) {
        CAPTURE(p);
        const double x = normal_quantile(p);
        CHECK(std::fabs(normal_cdf(x) - p) < 1e-10);
    }
}

TEST_CASE("normal_quantile symmetry and monotonicity") {
    for (double p = 0.01; p < 0.5; p += 0.01) {
        CAPTURE(p);
        CHECK(std::fabs(normal_quantile(p) + normal_quantile(1.0 - p)) < 1e-10);
    }
    double prev = normal_quantile(1e-6);
    for (double p = 1e-4; p < 1.0; p += 1e-3) {
        const double cur = normal_quantile(p);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("normal_quantile rejects endpoints and outside values") {
    CHECK_THROWS_AS(normal_quantile(0.0), ValidationError);
    CHECK_THROWS_AS(normal_quantile(1.0), ValidationError);
    CHECK_THROWS_AS(normal_quantile(-0.1), ValidationError);
    CHECK_THROWS_AS(normal_quantile(1.1), ValidationError);
    CHECK_THROWS_AS(normal_quantile(std::numeric_limits<double>::quiet_NaN()),
                    ValidationError);
}

TEST_CASE("Probability validates its range") {
    CHECK(Probability(0.0).value() == 0.0);
    CHECK(Probability(1.0).value() == 1.0);
    CHECK(Probability(0.31).value() == 0.31);
    CHECK_THROWS_AS(Probability(-0.01), ValidationError);
    CHECK_THROWS_AS(Probability(1.01), ValidationError);
    CHECK_THROWS_AS(Probability(std::numeric_limits<double>::quiet_NaN()),
                    ValidationError);
}
