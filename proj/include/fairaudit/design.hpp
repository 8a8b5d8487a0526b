#pragma once

#include "fairaudit/confusion.hpp"
#include "fairaudit/statsmath.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fairaudit {

// Inputs to a sample-size calculation.
struct AuditDesignInput {
    MetricKind metric = MetricKind::DP;
    Probability alpha{0.05}; // Type I error level
    Probability beta{0.2};   // 1 - power
    double u_tol = 0.0;       // minimum tolerated unfairness, >= 0
    double tau = 0.0;         // presumed unfairness, > u_tol
    GroupRates rates_g1;      // group 1 (privileged)
    GroupRates rates_g2;      // group 2 (disadvantaged)
    std::optional<double> allocation; // p1 in (0,1); absent = Neyman-optimal
};

struct AuditDesignOutput {
    std::uint64_t n_total = 0;
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;
    double p1 = 0.0;       // allocation used
    double n_real = 0.0;   // unrounded required sample size
    double sigma_g1 = 0.0; // group standard deviations
    double sigma_g2 = 0.0;
    double sigma2_g1 = 0.0; // group variances
    double sigma2_g2 = 0.0;
    double z_alpha = 0.0; // Z_{1-alpha/2}
    double z_beta = 0.0;  // Z_{1-beta}
};

// Neyman allocation p1 = sigma1/(sigma1 + sigma2). Both standard deviations
// must be strictly positive; a zero-variance group has no allocation share to
// trade off and is rejected here (sample_size handles that corner itself).
double optimal_allocation(double sigma_g1, double sigma_g2);

// Unrounded required total sample size at allocation p1:
//   (Z_{1-alpha/2} + Z_{1-beta})^2 (sigma2_g1/p1 + sigma2_g2/(1-p1)) / (tau - u_tol)^2.
double required_sample_size_real(double sigma2_g1, double sigma2_g2,
                                 double alpha, double beta,
                                 double u_tol, double tau, double p1);

// Minimum sample size and per-group split meeting the requested error rates.
// With no allocation given, the Neyman-optimal one is used, in which case the
// total reduces to ((Z_{1-alpha/2}+Z_{1-beta})(sigma1+sigma2)/(tau-u_tol))^2.
// Rounding: n_total = ceil(n_real); n1 = round(p1 * n_real) clamped to keep
// both strata non-empty.
AuditDesignOutput sample_size(const AuditDesignInput& input);

// Power achieved by a fixed per-group budget:
//   Phi((tau - u_tol)/sigma_U - Z_{1-alpha/2}),  sigma2_U = s1/n1 + s2/n2.
Probability achieved_power(MetricKind metric, Probability alpha,
                           double u_tol, double tau,
                           const GroupRates& rates_g1, const GroupRates& rates_g2,
                           std::uint64_t n1, std::uint64_t n2);

struct PowerPoint {
    std::uint64_t n = 0;
    double power = 0.0;
};

// achieved_power evaluated over an ascending grid of total sizes, splitting
// each n by the fixed allocation. Output is monotone nondecreasing in n.
std::vector<PowerPoint> power_curve(MetricKind metric, Probability alpha,
                                    double u_tol, double tau,
                                    const GroupRates& rates_g1,
                                    const GroupRates& rates_g2,
                                    const std::vector<std::uint64_t>& n_grid,
                                    double allocation);

// The split used for a total of n at allocation p1: round(p1*n) clamped so
// both groups get at least one sample.
std::pair<std::uint64_t, std::uint64_t> split_total(std::uint64_t n_total, double p1);

} // namespace fairaudit
