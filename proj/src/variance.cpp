#include "fairaudit/variance.hpp"

#include <cmath>
#include <string>

namespace fairaudit {

namespace {

// Smallest eigenvalue of a small symmetric matrix by cyclic Jacobi sweeps.
double min_eigenvalue(std::size_t dim, const std::vector<double>& m) {
    std::vector<double> a = m;
    auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * dim + c]; };
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < dim; ++p)
            for (std::size_t q = p + 1; q < dim; ++q) off += at(p, q) * at(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < dim; ++p) {
            for (std::size_t q = p + 1; q < dim; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < dim; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < dim; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    double lo = at(0, 0);
    for (std::size_t i = 1; i < dim; ++i) lo = std::min(lo, at(i, i));
    return lo;
}

double bernoulli_variance(double p) { return p * (1.0 - p); }

// Joint covariance of the indicator means (1_A, 1_B) for nested events
// A within B, scaled by n: Var 1_A = a(1-a), Cov(1_A, 1_B) = a(1-b),
// Var 1_B = b(1-b).
CovarianceMatrix nested_indicator_cov(double a, double b) {
    return CovarianceMatrix(
        2, {a * (1.0 - a), a * (1.0 - b), a * (1.0 - b), b * (1.0 - b)});
}

} // namespace

GradientVector::GradientVector(std::vector<double> entries)
    : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw ValidationError("gradient vector must have at least one entry");
    }
}

CovarianceMatrix::CovarianceMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim_ == 0 || entries_.size() != dim_ * dim_) {
        throw ValidationError("covariance matrix entries do not match dimension " +
                              std::to_string(dim_));
    }
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r + 1; c < dim_; ++c) {
            if (std::fabs(at(r, c) - at(c, r)) > 1e-12) {
                throw ValidationError("covariance matrix is not symmetric");
            }
        }
    }
    if (min_eigenvalue(dim_, entries_) < -1e-9) {
        throw ValidationError("covariance matrix is not positive semidefinite");
    }
}

std::optional<double> try_group_variance(MetricKind kind, const GroupRates& r) {
    const auto value = try_metric_value(kind, r);
    if (!value) return std::nullopt;
    switch (kind) {
        case MetricKind::DP:
        case MetricKind::ACC:
            return bernoulli_variance(*value);
        case MetricKind::TPR:
        case MetricKind::FNR:
            // var(1 - X) = var(X): the pair shares one formula.
            return bernoulli_variance(r.tpr()) / r.prevalence();
        case MetricKind::TNR:
        case MetricKind::FPR:
            return bernoulli_variance(r.tnr()) / (1.0 - r.prevalence());
        case MetricKind::PPV:
            return bernoulli_variance(*value) / r.positive_pred_rate();
        case MetricKind::NPV:
            return bernoulli_variance(*value) / (1.0 - r.positive_pred_rate());
    }
    return std::nullopt;
}

double group_variance(MetricKind kind, const GroupRates& r) {
    const auto v = try_group_variance(kind, r);
    if (!v) {
        metric_value(kind, r); // throws the matching UndefinedMetricError
        throw UndefinedMetricError(to_string(kind), "variance undefined");
    }
    return *v;
}

double delta_variance(const GradientVector& grad, const CovarianceMatrix& cov) {
    if (grad.dim() != cov.dim()) {
        throw ValidationError("gradient dimension " + std::to_string(grad.dim()) +
                              " does not match covariance dimension " +
                              std::to_string(cov.dim()));
    }
    double result = 0.0;
    for (std::size_t r = 0; r < cov.dim(); ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < cov.dim(); ++c) row += cov.at(r, c) * grad[c];
        result += grad[r] * row;
    }
    if (result < 0.0 && result >= -1e-12) result = 0.0;
    return result;
}

std::pair<GradientVector, CovarianceMatrix>
metric_joint_covariance(MetricKind kind, const GroupRates& r) {
    metric_value(kind, r); // surface undefined-metric errors up front
    switch (kind) {
        case MetricKind::DP: {
            const double mpp = r.positive_pred_rate();
            return {GradientVector({1.0}),
                    CovarianceMatrix(1, {bernoulli_variance(mpp)})};
        }
        case MetricKind::ACC: {
            const double acc = r.m_tp() + r.m_tn();
            return {GradientVector({1.0}),
                    CovarianceMatrix(1, {bernoulli_variance(acc)})};
        }
        case MetricKind::TPR:
        case MetricKind::FNR: {
            // d(a, b) = a/b (or 1 - a/b) with a = M_TP, b = M_P.
            const double a = r.m_tp();
            const double b = r.prevalence();
            const double sign = kind == MetricKind::TPR ? 1.0 : -1.0;
            return {GradientVector({sign / b, -sign * a / (b * b)}),
                    nested_indicator_cov(a, b)};
        }
        case MetricKind::TNR:
        case MetricKind::FPR: {
            const double a = r.m_tn();
            const double b = 1.0 - r.prevalence();
            const double sign = kind == MetricKind::TNR ? 1.0 : -1.0;
            return {GradientVector({sign / b, -sign * a / (b * b)}),
                    nested_indicator_cov(a, b)};
        }
        case MetricKind::PPV: {
            const double a = r.m_tp();
            const double b = r.positive_pred_rate();
            return {GradientVector({1.0 / b, -a / (b * b)}),
                    nested_indicator_cov(a, b)};
        }
        case MetricKind::NPV: {
            const double a = r.m_tn();
            const double b = 1.0 - r.positive_pred_rate();
            return {GradientVector({1.0 / b, -a / (b * b)}),
                    nested_indicator_cov(a, b)};
        }
    }
    throw ValidationError("unhandled metric kind");
}

UnfairnessVariance unfairness_variance(MetricKind kind,
                                       const GroupRates& rates_g1,
                                       const GroupRates& rates_g2,
                                       std::uint64_t n1, std::uint64_t n2) {
    if (n1 == 0 || n2 == 0) {
        throw ValidationError("unfairness variance requires n1 >= 1 and n2 >= 1");
    }
    UnfairnessVariance uv;
    uv.sigma2_g1 = group_variance(kind, rates_g1);
    uv.sigma2_g2 = group_variance(kind, rates_g2);
    uv.n1 = n1;
    uv.n2 = n2;
    uv.sigma2_u = uv.sigma2_g1 / static_cast<double>(n1) +
                  uv.sigma2_g2 / static_cast<double>(n2);
    return uv;
}

} // namespace fairaudit
