#include "fairaudit/confusion.hpp"

#include <cmath>

namespace fairaudit {

namespace {

void check_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError(std::string(name) + " must lie in [0, 1], got " +
                              std::to_string(v));
    }
}

} // namespace

const char* to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::DP: return "DP";
        case MetricKind::TPR: return "TPR";
        case MetricKind::FNR: return "FNR";
        case MetricKind::TNR: return "TNR";
        case MetricKind::FPR: return "FPR";
        case MetricKind::PPV: return "PPV";
        case MetricKind::NPV: return "NPV";
        case MetricKind::ACC: return "ACC";
    }
    return "?";
}

MetricKind metric_kind_from_string(const std::string& name) {
    if (name == "DP") return MetricKind::DP;
    if (name == "TPR") return MetricKind::TPR;
    if (name == "FNR") return MetricKind::FNR;
    if (name == "TNR") return MetricKind::TNR;
    if (name == "FPR") return MetricKind::FPR;
    if (name == "PPV") return MetricKind::PPV;
    if (name == "NPV") return MetricKind::NPV;
    if (name == "ACC") return MetricKind::ACC;
    throw ValidationError("unknown metric '" + name +
                          "' (expected one of DP, TPR, FNR, TNR, FPR, PPV, NPV, ACC)");
}

bool metric_needs_labels(MetricKind kind) {
    return kind != MetricKind::DP;
}

GroupRates GroupRates::from_parameters(double prevalence, double tpr, double tnr) {
    check_unit_interval(prevalence, "prevalence");
    check_unit_interval(tpr, "tpr");
    check_unit_interval(tnr, "tnr");
    GroupRates r;
    r.prevalence_ = prevalence;
    r.tpr_ = tpr;
    r.tnr_ = tnr;
    r.positive_pred_rate_ = prevalence * tpr + (1.0 - prevalence) * (1.0 - tnr);
    return r;
}

GroupRates GroupRates::from_positive_rate(double positive_pred_rate) {
    check_unit_interval(positive_pred_rate, "positive_pred_rate");
    GroupRates r;
    r.positive_pred_rate_ = positive_pred_rate;
    return r;
}

double GroupRates::prevalence() const {
    if (!prevalence_) {
        throw UndefinedMetricError("prevalence", "not determined by the supplied rates");
    }
    return *prevalence_;
}

double GroupRates::positive_pred_rate() const {
    if (!positive_pred_rate_) {
        throw UndefinedMetricError("positive_pred_rate", "not determined by the supplied rates");
    }
    return *positive_pred_rate_;
}

double GroupRates::tpr() const {
    if (!tpr_) {
        throw UndefinedMetricError("TPR", "group has no positive instances (M_P = 0)");
    }
    return *tpr_;
}

double GroupRates::tnr() const {
    if (!tnr_) {
        throw UndefinedMetricError("TNR", "group has no negative instances (M_P = 1)");
    }
    return *tnr_;
}

double GroupRates::m_tp() const {
    const double p = prevalence();
    return p == 0.0 ? 0.0 : p * tpr();
}

double GroupRates::m_fn() const {
    const double p = prevalence();
    return p == 0.0 ? 0.0 : p * (1.0 - tpr());
}

double GroupRates::m_tn() const {
    const double p = prevalence();
    return p == 1.0 ? 0.0 : (1.0 - p) * tnr();
}

double GroupRates::m_fp() const {
    const double p = prevalence();
    return p == 1.0 ? 0.0 : (1.0 - p) * (1.0 - tnr());
}

GroupRates rates_from_counts(const ConfusionCounts& counts) {
    const std::uint64_t n = counts.total();
    if (n == 0) {
        throw ValidationError("rates require at least one observation");
    }
    const std::uint64_t pos = counts.tp + counts.fn;
    const std::uint64_t neg = counts.fp + counts.tn;
    GroupRates r;
    r.prevalence_ = static_cast<double>(pos) / static_cast<double>(n);
    r.positive_pred_rate_ =
        static_cast<double>(counts.tp + counts.fp) / static_cast<double>(n);
    if (pos > 0) r.tpr_ = static_cast<double>(counts.tp) / static_cast<double>(pos);
    if (neg > 0) r.tnr_ = static_cast<double>(counts.tn) / static_cast<double>(neg);
    return r;
}

std::optional<double> try_metric_value(MetricKind kind, const GroupRates& r) {
    switch (kind) {
        case MetricKind::DP:
            if (!r.has_positive_pred_rate()) return std::nullopt;
            return r.positive_pred_rate();
        case MetricKind::TPR:
        case MetricKind::FNR: {
            if (!r.has_prevalence() || r.prevalence() == 0.0 || !r.has_tpr()) {
                return std::nullopt;
            }
            const double v = r.tpr();
            return kind == MetricKind::TPR ? v : 1.0 - v;
        }
        case MetricKind::TNR:
        case MetricKind::FPR: {
            if (!r.has_prevalence() || r.prevalence() == 1.0 || !r.has_tnr()) {
                return std::nullopt;
            }
            const double v = r.tnr();
            return kind == MetricKind::TNR ? v : 1.0 - v;
        }
        case MetricKind::PPV: {
            if (!r.has_prevalence() || !r.has_positive_pred_rate()) return std::nullopt;
            const double mpp = r.positive_pred_rate();
            if (mpp == 0.0) return std::nullopt;
            if (r.prevalence() > 0.0 && !r.has_tpr()) return std::nullopt;
            if (r.prevalence() < 1.0 && !r.has_tnr()) return std::nullopt;
            return r.m_tp() / mpp;
        }
        case MetricKind::NPV: {
            if (!r.has_prevalence() || !r.has_positive_pred_rate()) return std::nullopt;
            const double mnp = 1.0 - r.positive_pred_rate();
            if (mnp == 0.0) return std::nullopt;
            if (r.prevalence() > 0.0 && !r.has_tpr()) return std::nullopt;
            if (r.prevalence() < 1.0 && !r.has_tnr()) return std::nullopt;
            return r.m_tn() / mnp;
        }
        case MetricKind::ACC: {
            if (!r.has_prevalence()) return std::nullopt;
            if (r.prevalence() > 0.0 && !r.has_tpr()) return std::nullopt;
            if (r.prevalence() < 1.0 && !r.has_tnr()) return std::nullopt;
            return r.m_tp() + r.m_tn();
        }
    }
    return std::nullopt;
}

double metric_value(MetricKind kind, const GroupRates& r) {
    const auto v = try_metric_value(kind, r);
    if (!v) {
        switch (kind) {
            case MetricKind::DP:
                throw UndefinedMetricError("DP", "positive-prediction rate unknown");
            case MetricKind::TPR:
            case MetricKind::FNR:
                throw UndefinedMetricError(to_string(kind),
                                           "group has no positive instances (M_P = 0)");
            case MetricKind::TNR:
            case MetricKind::FPR:
                throw UndefinedMetricError(to_string(kind),
                                           "group has no negative instances (M_P = 1)");
            case MetricKind::PPV:
                throw UndefinedMetricError("PPV",
                                           "no positive predictions (M_PP = 0) or rates incomplete");
            case MetricKind::NPV:
                throw UndefinedMetricError("NPV",
                                           "no negative predictions (M_PP = 1) or rates incomplete");
            case MetricKind::ACC:
                throw UndefinedMetricError("ACC", "rates incomplete");
        }
    }
    return *v;
}

} // namespace fairaudit
