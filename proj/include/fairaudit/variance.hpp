#pragma once

#include "fairaudit/confusion.hpp"
#include "fairaudit/errors.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace fairaudit {

// Gradient of a metric seen as a function of cell-fraction means.
class GradientVector {
public:
    explicit GradientVector(std::vector<double> entries);

    std::size_t dim() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<double>& entries() const noexcept { return entries_; }

private:
    std::vector<double> entries_;
};

// Symmetric positive-semidefinite covariance of those means (scaled by n).
// Construction validates symmetry (1e-12) and that the smallest eigenvalue
// is above -1e-9.
class CovarianceMatrix {
public:
    // Row-major entries, dim x dim.
    CovarianceMatrix(std::size_t dim, std::vector<double> entries);

    std::size_t dim() const noexcept { return dim_; }
    double at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

private:
    std::size_t dim_;
    std::vector<double> entries_;
};

// Per-sample asymptotic variance of the metric estimate in one group.
//
// Closed forms: DP -> M_PP(1-M_PP); TPR/FNR -> M_TPR(1-M_TPR)/M_P;
// TNR/FPR -> M_TNR(1-M_TNR)/(1-M_P); PPV -> PPV(1-PPV)/M_PP;
// NPV -> NPV(1-NPV)/(1-M_PP); ACC -> acc(1-acc).
double group_variance(MetricKind kind, const GroupRates& rates);

// Non-throwing variant: nullopt when the variance is undefined on these rates.
std::optional<double> try_group_variance(MetricKind kind, const GroupRates& rates);

// Quadratic form grad^T cov grad. Results within -1e-12 of zero are clamped
// to zero. Throws ValidationError on dimension mismatch.
double delta_variance(const GradientVector& grad, const CovarianceMatrix& cov);

// The gradient and joint covariance whose quadratic form reproduces
// group_variance for the given metric. Linear metrics (DP, ACC) yield the
// one-dimensional identity case; ratio metrics yield the two-dimensional
// (numerator cell, denominator event) case with covariance entries
// a(1-a), a(1-b), b(1-b) for nested indicator events a <= b.
std::pair<GradientVector, CovarianceMatrix>
metric_joint_covariance(MetricKind kind, const GroupRates& rates);

// Variance of the unfairness estimate M_1 - M_2 for independent group samples.
struct UnfairnessVariance {
    double sigma2_g1 = 0.0;
    double sigma2_g2 = 0.0;
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;
    double sigma2_u = 0.0; // sigma2_g1/n1 + sigma2_g2/n2
};

UnfairnessVariance unfairness_variance(MetricKind kind,
                                       const GroupRates& rates_g1,
                                       const GroupRates& rates_g2,
                                       std::uint64_t n1, std::uint64_t n2);

} // namespace fairaudit
