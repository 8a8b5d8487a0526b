// fairaudit: design, run, and verify statistically powered fairness audits
// of binary classifiers.

#include <CLI11.hpp>

#include "../src/cli/commands.hpp"
#include "fairaudit/errors.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using fairaudit::cli::Overrides;
using fairaudit::cli::ReportDocument;

struct OutputOptions {
    bool json = false;
    std::string out_path;
};

void add_output_flags(CLI::App* cmd, OutputOptions& opts) {
    cmd->add_flag("--json", opts.json, "emit the machine-readable JSON report");
    cmd->add_option("--out", opts.out_path, "write the report to this file");
}

void add_override_flags(CLI::App* cmd, Overrides& overrides) {
    cmd->add_option("--metric", overrides.metric,
                    "metric (DP, TPR, FNR, TNR, FPR, PPV, NPV, ACC)");
    cmd->add_option("--alpha", overrides.alpha, "Type I error level");
    cmd->add_option("--beta", overrides.beta, "1 - power target");
    cmd->add_option("--u-tol", overrides.u_tol, "minimum tolerated unfairness");
    cmd->add_option("--tau", overrides.tau, "presumed unfairness");
    cmd->add_option("--privileged-group", overrides.privileged_group,
                    "label of the privileged group (becomes group 1)");
    cmd->add_option("--seed", overrides.seed, "master seed for simulation");
    cmd->add_option("--replicates", overrides.replicates, "number of replicates");
}

int emit(const ReportDocument& report, const OutputOptions& opts) {
    const std::string body =
        opts.json ? report.to_json().dump(2) + "\n" : report.to_text();
    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path);
        if (!out) {
            throw fairaudit::DataError("cannot open report file '" + opts.out_path +
                                       "' for writing");
        }
        out << body;
        if (!out) {
            throw fairaudit::DataError("failed while writing '" + opts.out_path + "'");
        }
    } else {
        std::cout << body;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistically powered fairness audits of binary classifiers"};
    app.require_subcommand(1);

    // design
    std::string design_config;
    Overrides design_overrides;
    OutputOptions design_output;
    auto* design = app.add_subcommand(
        "design", "required sample size and optimal group allocation");
    design->add_option("config", design_config, "design config file")->required();
    add_override_flags(design, design_overrides);
    add_output_flags(design, design_output);

    // test
    std::string test_data;
    std::string test_metric = "DP";
    double test_u_tol = 0.0;
    double test_alpha = 0.05;
    std::string test_privileged;
    OutputOptions test_output;
    auto* test = app.add_subcommand(
        "test", "run the unfairness hypothesis test on collected data");
    test->add_option("data", test_data, "CSV with header group,y_true,y_pred")
        ->required();
    test->add_option("--metric", test_metric, "metric to test")->required();
    test->add_option("--u-tol", test_u_tol, "minimum tolerated unfairness");
    test->add_option("--alpha", test_alpha, "Type I error level");
    test->add_option("--privileged-group", test_privileged,
                     "label of the privileged group (becomes group 1)")
        ->required();
    add_output_flags(test, test_output);

    // simulate
    std::string sim_config;
    Overrides sim_overrides;
    OutputOptions sim_output;
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo power and size study of a scenario");
    simulate->add_option("config", sim_config, "simulation config file")->required();
    add_override_flags(simulate, sim_overrides);
    add_output_flags(simulate, sim_output);

    // curve
    std::string curve_config;
    std::uint64_t curve_n_min = 0, curve_n_max = 0, curve_steps = 0;
    std::string curve_out;
    Overrides curve_overrides;
    OutputOptions curve_output;
    auto* curve = app.add_subcommand("curve", "power-versus-n curve as CSV");
    curve->add_option("config", curve_config, "design config file")->required();
    curve->add_option("--n-min", curve_n_min, "smallest total sample size")->required();
    curve->add_option("--n-max", curve_n_max, "largest total sample size")->required();
    curve->add_option("--steps", curve_steps, "number of grid points")->required();
    curve->add_option("--out", curve_out, "output CSV path")->required();
    add_override_flags(curve, curve_overrides);
    curve->add_flag("--json", curve_output.json, "emit the machine-readable JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (design->parsed()) {
            return emit(fairaudit::cli::cmd_design(design_config, design_overrides),
                        design_output);
        }
        if (test->parsed()) {
            return emit(fairaudit::cli::cmd_test(
                            test_data, fairaudit::metric_kind_from_string(test_metric),
                            test_u_tol, fairaudit::Probability(test_alpha),
                            test_privileged),
                        test_output);
        }
        if (simulate->parsed()) {
            return emit(fairaudit::cli::cmd_simulate(sim_config, sim_overrides),
                        sim_output);
        }
        if (curve->parsed()) {
            return emit(fairaudit::cli::cmd_curve(curve_config, curve_n_min,
                                                  curve_n_max, curve_steps, curve_out,
                                                  curve_overrides),
                        curve_output);
        }
    } catch (const fairaudit::AuditError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
