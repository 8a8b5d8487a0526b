#include "commands.hpp"

#include "config.hpp"
#include "csv.hpp"

#include "fairaudit/design.hpp"
#include "fairaudit/hypotest.hpp"
#include "fairaudit/simulate.hpp"
#include "fairaudit/variance.hpp"

#include <cmath>
#include <fstream>

namespace fairaudit::cli {

namespace {

nlohmann::json rates_to_json(const GroupRates& rates) {
    nlohmann::json j = nlohmann::json::object();
    if (rates.has_prevalence()) j["prevalence"] = rates.prevalence();
    if (rates.has_tpr()) j["tpr"] = rates.tpr();
    if (rates.has_tnr()) j["tnr"] = rates.tnr();
    if (rates.has_positive_pred_rate()) {
        j["positive_pred_rate"] = rates.positive_pred_rate();
    }
    return j;
}

GroupRates rates_from_tally(const GroupTally& tally, bool has_labels) {
    if (has_labels) return rates_from_counts(tally.counts);
    return GroupRates::from_positive_rate(static_cast<double>(tally.pred_positive) /
                                          static_cast<double>(tally.n));
}

void warn_unknown_keys(const ConfigFile& cfg,
                       const std::map<std::string, std::vector<std::string>>& accepted,
                       ReportDocument& report) {
    for (const auto& key : cfg.unknown_keys(accepted)) {
        report.warnings.push_back("ignored unknown config key " + key);
    }
}

void warn_rejected_rows(const AuditDataset& data, ReportDocument& report) {
    if (data.rejected_rows > 0) {
        report.warnings.push_back(std::to_string(data.rejected_rows) +
                                  " row(s) with missing fields were rejected");
    }
}

void warn_pooled_groups(const TwoGroupView& view, ReportDocument& report) {
    if (!view.pooled_labels.empty()) {
        report.warnings.push_back(
            "more than two group labels present; comparing '" + view.group1_label +
            "' against the remaining groups pooled as '" + view.group2_label + "'");
    }
}

MetricKind resolve_metric(const ConfigFile& cfg, const Overrides& overrides) {
    if (overrides.metric) return metric_kind_from_string(*overrides.metric);
    return metric_kind_from_string(cfg.require_string("", "metric"));
}

double resolve_double(const ConfigFile& cfg, const std::optional<double>& override_value,
                      const std::string& key) {
    if (override_value) return *override_value;
    return cfg.require_double("", key);
}

// Resolve the two groups of a design config: explicit [group1]/[group2]
// sections, or rates estimated from a pilot CSV.
struct DesignGroups {
    GroupRates rates_g1;
    GroupRates rates_g2;
    nlohmann::json echo = nlohmann::json::object();
};

DesignGroups resolve_design_groups(const ConfigFile& cfg, const Overrides& overrides,
                                   MetricKind metric, ReportDocument& report) {
    DesignGroups groups;
    if (cfg.has("", "pilot_csv")) {
        const std::string pilot_path = cfg.require_string("", "pilot_csv");
        const std::string privileged = overrides.privileged_group
                                           ? *overrides.privileged_group
                                           : cfg.require_string("", "privileged_group");
        const AuditDataset data = load_audit_csv(pilot_path);
        warn_rejected_rows(data, report);
        if (metric_needs_labels(metric) && !data.has_y_true) {
            throw DataError("pilot file '" + pilot_path +
                            "' is missing the 'y_true' column required for metric " +
                            to_string(metric));
        }
        const TwoGroupView view = split_privileged(data, privileged);
        warn_pooled_groups(view, report);
        groups.rates_g1 = rates_from_tally(view.group1, data.has_y_true);
        groups.rates_g2 = rates_from_tally(view.group2, data.has_y_true);
        groups.echo["pilot_csv"] = pilot_path;
        groups.echo["group1"] = rates_to_json(groups.rates_g1);
        groups.echo["group1"]["label"] = view.group1_label;
        groups.echo["group2"] = rates_to_json(groups.rates_g2);
        groups.echo["group2"]["label"] = view.group2_label;
        return groups;
    }
    groups.rates_g1 = group_rates_from_config(cfg, "group1");
    groups.rates_g2 = group_rates_from_config(cfg, "group2");
    groups.echo["group1"] = rates_to_json(groups.rates_g1);
    groups.echo["group2"] = rates_to_json(groups.rates_g2);
    return groups;
}

const std::map<std::string, std::vector<std::string>> kDesignKeys = {
    {"", {"metric", "alpha", "beta", "u_tol", "tau", "allocation", "pilot_csv",
          "privileged_group"}},
    {"group1", {"prevalence", "tpr", "tnr", "positive_pred_rate"}},
    {"group2", {"prevalence", "tpr", "tnr", "positive_pred_rate"}},
};

const std::map<std::string, std::vector<std::string>> kSimulateKeys = {
    {"", {"metric", "alpha", "u_tol", "n1", "n2", "replicates", "master_seed"}},
    {"group1", {"prevalence", "tpr", "tnr", "positive_pred_rate"}},
    {"group2", {"prevalence", "tpr", "tnr", "positive_pred_rate"}},
};

AuditDesignInput design_input_from_config(const ConfigFile& cfg,
                                          const Overrides& overrides,
                                          ReportDocument& report) {
    AuditDesignInput input;
    input.metric = resolve_metric(cfg, overrides);
    input.alpha = Probability(resolve_double(cfg, overrides.alpha, "alpha"));
    input.beta = Probability(resolve_double(cfg, overrides.beta, "beta"));
    input.u_tol = resolve_double(cfg, overrides.u_tol, "u_tol");
    input.tau = resolve_double(cfg, overrides.tau, "tau");
    input.allocation = cfg.get_double("", "allocation");

    const DesignGroups groups = resolve_design_groups(cfg, overrides, input.metric, report);
    input.rates_g1 = groups.rates_g1;
    input.rates_g2 = groups.rates_g2;

    report.inputs["metric"] = to_string(input.metric);
    report.inputs["alpha"] = input.alpha.value();
    report.inputs["beta"] = input.beta.value();
    report.inputs["u_tol"] = input.u_tol;
    report.inputs["tau"] = input.tau;
    report.inputs["allocation"] =
        input.allocation ? nlohmann::json(*input.allocation) : nlohmann::json("optimal");
    for (const auto& [key, value] : groups.echo.items()) report.inputs[key] = value;
    return input;
}

} // namespace

ReportDocument cmd_design(const std::string& config_path, const Overrides& overrides) {
    ReportDocument report;
    report.command = "design";
    const ConfigFile cfg = ConfigFile::parse_file(config_path);
    warn_unknown_keys(cfg, kDesignKeys, report);
    const AuditDesignInput input = design_input_from_config(cfg, overrides, report);
    const AuditDesignOutput out = sample_size(input);

    report.outputs["n_total"] = out.n_total;
    report.outputs["n1"] = out.n1;
    report.outputs["n2"] = out.n2;
    report.outputs["p1"] = out.p1;
    report.outputs["n_real"] = out.n_real;
    report.outputs["sigma_g1"] = out.sigma_g1;
    report.outputs["sigma_g2"] = out.sigma_g2;
    report.outputs["sigma2_g1"] = out.sigma2_g1;
    report.outputs["sigma2_g2"] = out.sigma2_g2;
    report.outputs["z_alpha"] = out.z_alpha;
    report.outputs["z_beta"] = out.z_beta;
    return report;
}

ReportDocument cmd_test(const std::string& data_path, MetricKind metric,
                        double u_tol, Probability alpha,
                        const std::string& privileged_group) {
    ReportDocument report;
    report.command = "test";
    if (privileged_group.empty()) {
        throw ValidationError(
            "the privileged group must be designated explicitly (--privileged-group); "
            "group order determines the sign of the unfairness estimate");
    }
    const AuditDataset data = load_audit_csv(data_path);
    warn_rejected_rows(data, report);
    if (metric_needs_labels(metric) && !data.has_y_true) {
        throw DataError("data file '" + data_path +
                        "' is missing the 'y_true' column required for metric " +
                        to_string(metric));
    }
    const TwoGroupView view = split_privileged(data, privileged_group);
    warn_pooled_groups(view, report);

    const GroupRates r1 = rates_from_tally(view.group1, data.has_y_true);
    const GroupRates r2 = rates_from_tally(view.group2, data.has_y_true);
    // Name the offending group by its data label, not by its position.
    try {
        metric_value(metric, r1);
    } catch (const UndefinedMetricError& e) {
        throw UndefinedMetricError(e.metric(), "group '" + view.group1_label + "'",
                                   e.what());
    }
    try {
        metric_value(metric, r2);
    } catch (const UndefinedMetricError& e) {
        throw UndefinedMetricError(e.metric(), "group '" + view.group2_label + "'",
                                   e.what());
    }
    const TestOutcome outcome =
        run_test(metric, r1, view.group1.n, r2, view.group2.n, u_tol, alpha);

    report.inputs["data"] = data_path;
    report.inputs["metric"] = to_string(metric);
    report.inputs["alpha"] = alpha.value();
    report.inputs["u_tol"] = u_tol;
    report.inputs["privileged_group"] = privileged_group;

    report.outputs["group1"] = view.group1_label;
    report.outputs["group2"] = view.group2_label;
    report.outputs["n1"] = outcome.n1;
    report.outputs["n2"] = outcome.n2;
    report.outputs["u_hat"] = outcome.u_hat;
    report.outputs["sigma_u_hat"] = outcome.sigma_u_hat;
    report.outputs["statistic"] = outcome.statistic;
    report.outputs["p_value"] = outcome.p_value;
    report.outputs["z_critical"] = outcome.z_critical;
    report.outputs["reject"] = outcome.reject;
    return report;
}

ReportDocument cmd_simulate(const std::string& config_path, const Overrides& overrides) {
    ReportDocument report;
    report.command = "simulate";
    const ConfigFile cfg = ConfigFile::parse_file(config_path);
    warn_unknown_keys(cfg, kSimulateKeys, report);

    SimConfig sim;
    sim.metric = resolve_metric(cfg, overrides);
    sim.alpha = Probability(resolve_double(cfg, overrides.alpha, "alpha"));
    sim.u_tol = resolve_double(cfg, overrides.u_tol, "u_tol");
    sim.n1 = cfg.require_uint("", "n1");
    sim.n2 = cfg.require_uint("", "n2");
    sim.replicates = overrides.replicates ? *overrides.replicates
                                          : cfg.require_uint("", "replicates");
    if (sim.replicates == 0) {
        throw ValidationError("replicates must be >= 1");
    }
    sim.master_seed = overrides.seed ? *overrides.seed
                                     : cfg.require_uint("", "master_seed");
    sim.population.rates_g1 = group_rates_from_config(cfg, "group1");
    sim.population.rates_g2 = group_rates_from_config(cfg, "group2");

    report.inputs["metric"] = to_string(sim.metric);
    report.inputs["alpha"] = sim.alpha.value();
    report.inputs["u_tol"] = sim.u_tol;
    report.inputs["n1"] = sim.n1;
    report.inputs["n2"] = sim.n2;
    report.inputs["replicates"] = sim.replicates;
    report.inputs["master_seed"] = sim.master_seed;
    report.inputs["group1"] = rates_to_json(sim.population.rates_g1);
    report.inputs["group2"] = rates_to_json(sim.population.rates_g2);

    const SimResult result = run_replicates(sim);
    report.outputs["rejection_rate"] = result.rejection_rate;
    report.outputs["mean_u_hat"] = result.mean_u_hat;
    report.outputs["empirical_var_g1"] =
        std::isnan(result.empirical_var_g1) ? nlohmann::json()
                                            : nlohmann::json(result.empirical_var_g1);
    report.outputs["empirical_var_g2"] =
        std::isnan(result.empirical_var_g2) ? nlohmann::json()
                                            : nlohmann::json(result.empirical_var_g2);
    report.outputs["undefined_replicates"] = result.undefined_replicates;
    report.outputs["replicates_used"] = result.replicates_used;
    return report;
}

ReportDocument cmd_curve(const std::string& config_path, std::uint64_t n_min,
                         std::uint64_t n_max, std::uint64_t steps,
                         const std::string& out_path, const Overrides& overrides) {
    ReportDocument report;
    report.command = "curve";
    if (n_min >= n_max) {
        throw ValidationError("n-min must be strictly less than n-max");
    }
    if (n_min < 2) {
        throw ValidationError("n-min must be >= 2 so both groups receive a sample");
    }
    if (steps < 2) {
        throw ValidationError("steps must be >= 2");
    }
    if (steps > n_max - n_min + 1) {
        throw ValidationError("steps exceed the number of distinct sizes in "
                              "[n-min, n-max]");
    }

    const ConfigFile cfg = ConfigFile::parse_file(config_path);
    warn_unknown_keys(cfg, kDesignKeys, report);
    const AuditDesignInput input = design_input_from_config(cfg, overrides, report);

    double p1;
    if (input.allocation) {
        p1 = *input.allocation;
    } else {
        const double s1 = std::sqrt(group_variance(input.metric, input.rates_g1));
        const double s2 = std::sqrt(group_variance(input.metric, input.rates_g2));
        if (s1 == 0.0 || s2 == 0.0) {
            throw DegenerateStatsError(
                "the metric has zero variance in a group, so no optimal allocation "
                "exists; supply an explicit 'allocation' in the config");
        }
        p1 = optimal_allocation(s1, s2);
    }

    // Integer linspace; spacing >= 1 keeps it strictly ascending.
    std::vector<std::uint64_t> grid;
    grid.reserve(steps);
    for (std::uint64_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
        grid.push_back(static_cast<std::uint64_t>(
            std::llround(static_cast<double>(n_min) +
                         t * static_cast<double>(n_max - n_min))));
    }

    const auto curve = power_curve(input.metric, input.alpha, input.u_tol, input.tau,
                                   input.rates_g1, input.rates_g2, grid, p1);

    std::ofstream out(out_path);
    if (!out) {
        throw DataError("cannot open output file '" + out_path + "' for writing");
    }
    out << "n,power\n";
    nlohmann::json points = nlohmann::json::array();
    for (const auto& point : curve) {
        out << point.n << "," << format_number(point.power) << "\n";
        points.push_back({{"n", point.n}, {"power", point.power}});
    }
    if (!out) {
        throw DataError("failed while writing '" + out_path + "'");
    }

    report.inputs["n_min"] = n_min;
    report.inputs["n_max"] = n_max;
    report.inputs["steps"] = steps;
    report.inputs["allocation_used"] = p1;
    report.outputs["out_path"] = out_path;
    report.outputs["points"] = points;
    return report;
}

} // namespace fairaudit::cli
