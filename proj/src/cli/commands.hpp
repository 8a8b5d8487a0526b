#pragma once

#include "report.hpp"

#include "fairaudit/confusion.hpp"
#include "fairaudit/statsmath.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace fairaudit::cli {

// Command-line overrides applied on top of config-file values.
struct Overrides {
    std::optional<std::string> metric;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> u_tol;
    std::optional<double> tau;
    std::optional<std::string> privileged_group;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> replicates;
};

// Sample-size design from a config file (direct rates or a pilot CSV).
ReportDocument cmd_design(const std::string& config_path, const Overrides& overrides);

// Unfairness hypothesis test on a collected dataset.
ReportDocument cmd_test(const std::string& data_path, MetricKind metric,
                        double u_tol, Probability alpha,
                        const std::string& privileged_group);

// Monte Carlo study of a configured scenario.
ReportDocument cmd_simulate(const std::string& config_path, const Overrides& overrides);

// Power-versus-n curve written as CSV.
ReportDocument cmd_curve(const std::string& config_path, std::uint64_t n_min,
                         std::uint64_t n_max, std::uint64_t steps,
                         const std::string& out_path, const Overrides& overrides);

} // namespace fairaudit::cli
