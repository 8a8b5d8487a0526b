#include "fairaudit/hypotest.hpp"

#include "fairaudit/variance.hpp"

#include <cmath>
#include <string>

namespace fairaudit {

namespace {

double group_metric_or_rethrow(MetricKind kind, const GroupRates& rates,
                               const char* group_name) {
    try {
        return metric_value(kind, rates);
    } catch (const UndefinedMetricError& e) {
        throw UndefinedMetricError(e.metric(), group_name, e.what());
    }
}

} // namespace

double estimate_unfairness(MetricKind kind, const ConfusionCounts& c1,
                           const ConfusionCounts& c2) {
    const double m1 = group_metric_or_rethrow(kind, rates_from_counts(c1), "group 1");
    const double m2 = group_metric_or_rethrow(kind, rates_from_counts(c2), "group 2");
    return m1 - m2;
}

TestOutcome run_test(MetricKind kind, const GroupRates& rates_g1, std::uint64_t n1,
                     const GroupRates& rates_g2, std::uint64_t n2, double u_tol,
                     Probability alpha) {
    if (n1 == 0 || n2 == 0) {
        throw ValidationError("the test requires at least one observation per group");
    }
    if (!(alpha.value() > 0.0 && alpha.value() < 1.0)) {
        throw ValidationError("alpha must lie strictly inside (0, 1)");
    }
    if (!std::isfinite(u_tol)) {
        throw ValidationError("u_tol must be finite");
    }

    TestOutcome out;
    out.alpha = alpha.value();
    out.u_tol = u_tol;
    out.n1 = n1;
    out.n2 = n2;
    const double m1 = group_metric_or_rethrow(kind, rates_g1, "group 1");
    const double m2 = group_metric_or_rethrow(kind, rates_g2, "group 2");
    out.u_hat = m1 - m2;

    const UnfairnessVariance uv =
        unfairness_variance(kind, rates_g1, rates_g2, n1, n2);
    out.sigma_u_hat = std::sqrt(uv.sigma2_u);
    if (out.sigma_u_hat == 0.0) {
        throw DegenerateStatsError(
            std::string(to_string(kind)) +
            " shows no variability in either group's sample; the test statistic "
            "is undefined");
    }

    out.statistic = (out.u_hat - u_tol) / out.sigma_u_hat;
    out.z_critical = normal_quantile(1.0 - alpha.value() / 2.0);
    out.p_value = 1.0 - normal_cdf(out.statistic);
    out.reject = out.statistic > out.z_critical;
    return out;
}

TestOutcome run_test(MetricKind kind, const ConfusionCounts& c1,
                     const ConfusionCounts& c2, double u_tol, Probability alpha) {
    return run_test(kind, rates_from_counts(c1), c1.total(), rates_from_counts(c2),
                    c2.total(), u_tol, alpha);
}

} // namespace fairaudit
