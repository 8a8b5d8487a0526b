#include "fairaudit/design.hpp"

#include "fairaudit/variance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fairaudit {

namespace {

void check_open_unit(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
        throw ValidationError(std::string(name) + " must lie strictly inside (0, 1), got " +
                              std::to_string(v));
    }
}

void check_feasible(double u_tol, double tau) {
    if (!(u_tol >= 0.0) || !std::isfinite(u_tol)) {
        throw ValidationError("u_tol must be a finite value >= 0, got " +
                              std::to_string(u_tol));
    }
    if (!std::isfinite(tau) || !(tau > u_tol)) {
        throw InfeasibleDesignError(
            "presumed unfairness tau = " + std::to_string(tau) +
            " must strictly exceed u_tol = " + std::to_string(u_tol) +
            "; no finite sample size can separate them");
    }
}

} // namespace

double optimal_allocation(double sigma_g1, double sigma_g2) {
    if (!(sigma_g1 > 0.0) || !(sigma_g2 > 0.0)) {
        throw DegenerateStatsError(
            "Neyman allocation requires strictly positive standard deviations in "
            "both groups (got " + std::to_string(sigma_g1) + ", " +
            std::to_string(sigma_g2) + "); a constant metric has no allocation share");
    }
    return sigma_g1 / (sigma_g1 + sigma_g2);
}

double required_sample_size_real(double sigma2_g1, double sigma2_g2,
                                 double alpha, double beta,
                                 double u_tol, double tau, double p1) {
    check_open_unit(alpha, "alpha");
    check_open_unit(beta, "beta");
    check_open_unit(p1, "allocation p1");
    check_feasible(u_tol, tau);
    const double z = normal_quantile(1.0 - alpha / 2.0) + normal_quantile(1.0 - beta);
    const double spread = sigma2_g1 / p1 + sigma2_g2 / (1.0 - p1);
    const double gap = tau - u_tol;
    return z * z * spread / (gap * gap);
}

std::pair<std::uint64_t, std::uint64_t> split_total(std::uint64_t n_total, double p1) {
    const double raw = std::round(p1 * static_cast<double>(n_total));
    std::uint64_t n1 = raw < 1.0 ? 1 : static_cast<std::uint64_t>(raw);
    n1 = std::clamp<std::uint64_t>(n1, 1, n_total - 1);
    return {n1, n_total - n1};
}

AuditDesignOutput sample_size(const AuditDesignInput& input) {
    check_open_unit(input.alpha.value(), "alpha");
    check_open_unit(input.beta.value(), "beta");
    check_feasible(input.u_tol, input.tau);

    AuditDesignOutput out;
    out.sigma2_g1 = group_variance(input.metric, input.rates_g1);
    out.sigma2_g2 = group_variance(input.metric, input.rates_g2);
    if (out.sigma2_g1 == 0.0 && out.sigma2_g2 == 0.0) {
        throw DegenerateStatsError(
            "the metric has zero variance in both groups; the unfairness estimate "
            "is exact and no sample-size tradeoff exists");
    }
    out.sigma_g1 = std::sqrt(out.sigma2_g1);
    out.sigma_g2 = std::sqrt(out.sigma2_g2);
    out.z_alpha = normal_quantile(1.0 - input.alpha.value() / 2.0);
    out.z_beta = normal_quantile(1.0 - input.beta.value());

    const double gap = input.tau - input.u_tol;
    const double z = out.z_alpha + out.z_beta;
    if (input.allocation) {
        check_open_unit(*input.allocation, "allocation p1");
        out.p1 = *input.allocation;
        out.n_real = required_sample_size_real(out.sigma2_g1, out.sigma2_g2,
                                               input.alpha.value(), input.beta.value(),
                                               input.u_tol, input.tau, out.p1);
    } else {
        // Neyman-optimal allocation; the spread collapses to (sigma1+sigma2)^2,
        // which also covers a single zero-variance group.
        out.p1 = out.sigma_g1 / (out.sigma_g1 + out.sigma_g2);
        const double scaled = z * (out.sigma_g1 + out.sigma_g2) / gap;
        out.n_real = scaled * scaled;
    }

    double n_ceiled = std::ceil(out.n_real);
    if (n_ceiled < 2.0) n_ceiled = 2.0; // both strata must be non-empty
    out.n_total = static_cast<std::uint64_t>(n_ceiled);

    const double share = out.p1 * out.n_real;
    std::uint64_t n1 = share < 1.0 ? 1 : static_cast<std::uint64_t>(std::round(share));
    out.n1 = std::clamp<std::uint64_t>(n1, 1, out.n_total - 1);
    out.n2 = out.n_total - out.n1;
    if (out.p1 <= 0.0 || out.p1 >= 1.0) {
        // A zero-variance group sits at the allocation boundary; report the
        // effective share after clamping instead.
        out.p1 = static_cast<double>(out.n1) / static_cast<double>(out.n_total);
    }
    return out;
}

Probability achieved_power(MetricKind metric, Probability alpha,
                           double u_tol, double tau,
                           const GroupRates& rates_g1, const GroupRates& rates_g2,
                           std::uint64_t n1, std::uint64_t n2) {
    check_open_unit(alpha.value(), "alpha");
    if (!std::isfinite(tau) || !std::isfinite(u_tol)) {
        throw ValidationError("tau and u_tol must be finite");
    }
    const UnfairnessVariance uv =
        unfairness_variance(metric, rates_g1, rates_g2, n1, n2);
    if (uv.sigma2_u == 0.0) {
        throw DegenerateStatsError(
            "the unfairness estimate has zero variance at this design; power is "
            "not defined by the normal approximation");
    }
    const double sigma_u = std::sqrt(uv.sigma2_u);
    const double z_alpha = normal_quantile(1.0 - alpha.value() / 2.0);
    return Probability(normal_cdf((tau - u_tol) / sigma_u - z_alpha));
}

std::vector<PowerPoint> power_curve(MetricKind metric, Probability alpha,
                                    double u_tol, double tau,
                                    const GroupRates& rates_g1,
                                    const GroupRates& rates_g2,
                                    const std::vector<std::uint64_t>& n_grid,
                                    double allocation) {
    if (n_grid.empty()) {
        throw ValidationError("power curve requires a non-empty grid of sample sizes");
    }
    check_open_unit(allocation, "allocation p1");
    std::vector<PowerPoint> curve;
    curve.reserve(n_grid.size());
    std::uint64_t prev = 0;
    for (const std::uint64_t n : n_grid) {
        if (n < 2) {
            throw ValidationError("grid sample sizes must be >= 2 so both groups "
                                  "receive at least one sample");
        }
        if (n <= prev) {
            throw ValidationError("grid sample sizes must be strictly ascending");
        }
        prev = n;
        const auto [n1, n2] = split_total(n, allocation);
        curve.push_back(
            {n, achieved_power(metric, alpha, u_tol, tau, rates_g1, rates_g2, n1, n2)
                    .value()});
    }
    return curve;
}

} // namespace fairaudit
