#pragma once

#include "fairaudit/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace fairaudit {

// Which performance metric defines the unfairness U = M_1 - M_2.
enum class MetricKind {
    DP,  // demographic parity: rate of positive predictions
    TPR, // true positive rate (recall, sensitivity)
    FNR, // false negative rate = 1 - TPR
    TNR, // true negative rate (specificity)
    FPR, // false positive rate = 1 - TNR
    PPV, // positive predictive value (precision)
    NPV, // negative predictive value
    ACC, // accuracy
};

const char* to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);
bool metric_needs_labels(MetricKind kind); // DP works from predictions alone

// The four cells of a group's confusion matrix.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const noexcept { return tp + fp + fn + tn; }

    bool operator==(const ConfusionCounts&) const = default;
};

// Population-level rates for one group.
//
// The generative parameterization is the triple (prevalence, tpr, tnr); the
// positive-prediction rate and all cell fractions follow from it. Rates built
// from observed counts, or from a positive-prediction rate alone, may leave
// some fields undefined; consuming an undefined field raises
// UndefinedMetricError rather than propagating a silent zero.
class GroupRates {
public:
    // Default-constructed rates have no defined fields.
    GroupRates() = default;

    // Full generative triple; positive_pred_rate is derived.
    static GroupRates from_parameters(double prevalence, double tpr, double tnr);

    // Only the positive-prediction rate is known (enough for DP).
    static GroupRates from_positive_rate(double positive_pred_rate);

    double prevalence() const;         // M_P
    double positive_pred_rate() const; // M_PP
    double tpr() const;                // M_TPR
    double tnr() const;                // M_TNR

    bool has_prevalence() const noexcept { return prevalence_.has_value(); }
    bool has_positive_pred_rate() const noexcept { return positive_pred_rate_.has_value(); }
    bool has_tpr() const noexcept { return tpr_.has_value(); }
    bool has_tnr() const noexcept { return tnr_.has_value(); }

    // Cell fractions. Defined whenever the prevalence is, with the convention
    // that an empty class contributes zero mass (e.g. M_TP = 0 when M_P = 0
    // even if the TPR itself is undefined).
    double m_tp() const;
    double m_fn() const;
    double m_tn() const;
    double m_fp() const;

private:
    friend GroupRates rates_from_counts(const ConfusionCounts& counts);

    std::optional<double> prevalence_;
    std::optional<double> positive_pred_rate_;
    std::optional<double> tpr_;
    std::optional<double> tnr_;
};

// Point estimates of the rates from observed counts. Ratios with zero
// denominators (e.g. TPR with no positive instances) are flagged as
// undefined, not zeroed. Requires total count >= 1.
GroupRates rates_from_counts(const ConfusionCounts& counts);

// The value of a performance metric on a group, in [0, 1]. Throws
// UndefinedMetricError when the metric's denominator is zero or a required
// rate is unknown.
double metric_value(MetricKind kind, const GroupRates& rates);

// Non-throwing variant: nullopt when the metric is undefined on these rates.
std::optional<double> try_metric_value(MetricKind kind, const GroupRates& rates);

} // namespace fairaudit
