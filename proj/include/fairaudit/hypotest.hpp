#pragma once

#include "fairaudit/confusion.hpp"
#include "fairaudit/statsmath.hpp"

#include <cstdint>

namespace fairaudit {

// Outcome of the one-sided unfairness test.
//
// The null U <= u_tol is rejected when (u_hat - u_tol)/sigma_u_hat exceeds
// Z_{1-alpha/2}; the reported p-value is the upper-tail 1 - Phi(statistic),
// so the rejection rule is equivalent to p_value < alpha/2.
struct TestOutcome {
    double u_hat = 0.0;       // estimated unfairness M1_hat - M2_hat
    double sigma_u_hat = 0.0; // plug-in standard error of u_hat
    double statistic = 0.0;   // (u_hat - u_tol) / sigma_u_hat
    double p_value = 1.0;     // one-sided upper-tail p-value
    bool reject = false;
    double z_critical = 0.0; // Z_{1-alpha/2}
    double alpha = 0.0;
    double u_tol = 0.0;
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;
};

// Point estimate of unfairness from per-group confusion counts. Errors name
// the group whose metric is undefined.
double estimate_unfairness(MetricKind kind, const ConfusionCounts& c1,
                           const ConfusionCounts& c2);

// Run the test on collected counts. The standard error is the plug-in
// estimator: observed rates fed through the group-variance formulas, scaled
// by the observed group sizes.
TestOutcome run_test(MetricKind kind, const ConfusionCounts& c1,
                     const ConfusionCounts& c2, double u_tol, Probability alpha);

// Rates-level variant used when full confusion counts are not available
// (e.g. demographic parity audits that never collected true labels).
TestOutcome run_test(MetricKind kind, const GroupRates& rates_g1, std::uint64_t n1,
                     const GroupRates& rates_g2, std::uint64_t n2, double u_tol,
                     Probability alpha);

} // namespace fairaudit
