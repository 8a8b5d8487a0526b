#pragma once

#include <stdexcept>
#include <string>

namespace fairaudit {

// Exit-code categories used by the CLI. Library code throws the typed
// exceptions below; the CLI maps them to these codes.
enum class ErrorCode : int {
    validation = 2,        // bad arguments, malformed config, contract violations
    data = 3,              // unreadable/malformed data files, I/O failures
    infeasible_design = 4, // tau <= u_tol and similar unsatisfiable designs
    degenerate_stats = 5,  // zero variance, undefined metrics, unusable estimates
};

class AuditError : public std::runtime_error {
public:
    AuditError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Invalid arguments, out-of-domain inputs, malformed configs.
class ValidationError : public AuditError {
public:
    explicit ValidationError(const std::string& what)
        : AuditError(ErrorCode::validation, what) {}
};

// Problems reading or interpreting data files.
class DataError : public AuditError {
public:
    explicit DataError(const std::string& what)
        : AuditError(ErrorCode::data, what) {}
};

// Design cannot be satisfied (e.g. presumed unfairness not above tolerance).
class InfeasibleDesignError : public AuditError {
public:
    explicit InfeasibleDesignError(const std::string& what)
        : AuditError(ErrorCode::infeasible_design, what) {}
};

// Statistics that are well defined in form but unusable on the given inputs:
// zero variance in every group, degenerate samples, unreliable estimates.
class DegenerateStatsError : public AuditError {
public:
    explicit DegenerateStatsError(const std::string& what)
        : AuditError(ErrorCode::degenerate_stats, what) {}
};

// A metric whose defining ratio has a zero denominator (e.g. TPR with no
// positive instances). Carries the metric name and, when known, the group.
class UndefinedMetricError : public DegenerateStatsError {
public:
    UndefinedMetricError(const std::string& metric, const std::string& reason)
        : DegenerateStatsError(metric + " is undefined: " + reason),
          metric_(metric) {}

    UndefinedMetricError(const std::string& metric, const std::string& group,
                         const std::string& reason)
        : DegenerateStatsError(metric + " is undefined for " + group + ": " + reason),
          metric_(metric), group_(group) {}

    const std::string& metric() const noexcept { return metric_; }
    const std::string& group() const noexcept { return group_; }

private:
    std::string metric_;
    std::string group_;
};

} // namespace fairaudit
