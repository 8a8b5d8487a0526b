// Acceptance suite: every release criterion, one printed line each.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli/commands.hpp"
#include "fairaudit/design.hpp"
#include "fairaudit/hypotest.hpp"
#include "fairaudit/simulate.hpp"
#include "fairaudit/variance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <vector>

using namespace fairaudit;

namespace {

const std::string kDataDir = FAIRAUDIT_TEST_DATA_DIR;
const std::string kGoldenDir = FAIRAUDIT_GOLDEN_DIR;
const std::string kConfigDir = FAIRAUDIT_CONFIG_DIR;
const std::string kCliPath = FAIRAUDIT_CLI_PATH;

bool report_criterion(int number, const std::string& what, bool ok, double seconds) {
    std::printf("criterion %d [%s] %s (%.1fs)\n", number, ok ? "PASS" : "FAIL",
                what.c_str(), seconds);
    std::fflush(stdout);
    return ok;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

const MetricKind kAllKinds[] = {MetricKind::DP,  MetricKind::TPR, MetricKind::FNR,
                                MetricKind::TNR, MetricKind::FPR, MetricKind::PPV,
                                MetricKind::NPV, MetricKind::ACC};

// Ten interior scenarios: every metric defined with strictly positive variance.
std::vector<GroupRates> scenario_grid() {
    const double params[][3] = {
        {0.5, 0.79, 0.85}, {0.3, 0.7, 0.6},   {0.07, 0.68, 0.9}, {0.5, 0.8, 0.6},
        {0.25, 0.9, 0.95}, {0.8, 0.55, 0.45}, {0.12, 0.33, 0.77}, {0.6, 0.97, 0.2},
        {0.9, 0.61, 0.83}, {0.35, 0.15, 0.4},
    };
    std::vector<GroupRates> scenarios;
    for (const auto& p : params) {
        scenarios.push_back(GroupRates::from_parameters(p[0], p[1], p[2]));
    }
    return scenarios;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct RunResult {
    int exit_code = -1;
    std::string stdout_bytes;
};

RunResult run_cli(const std::string& args, const std::string& workdir = "") {
    const std::string out_file = "acceptance_cli_out.txt";
    std::string cmd;
    if (!workdir.empty()) cmd += "cd '" + workdir + "' && ";
    const std::string out_path =
        workdir.empty() ? out_file : workdir + "/" + out_file;
    cmd += "'" + kCliPath + "' " + args + " > '" + out_file + "' 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.stdout_bytes = read_file(out_path);
    std::remove(out_path.c_str());
    return result;
}

} // namespace

TEST_CASE("criterion 1: design command reproduces the worked DP example") {
    Timer timer;
    const cli::ReportDocument report =
        cli::cmd_design(kConfigDir + "/dp_design_example.ini", {});
    const double s2_1 = report.outputs.at("sigma2_g1").get<double>();
    const double s2_2 = report.outputs.at("sigma2_g2").get<double>();
    const auto n = report.outputs.at("n_total").get<std::uint64_t>();
    const bool ok = std::fabs(s2_1 - 0.227) <= 0.001 &&
                    std::fabs(s2_2 - 0.246) <= 0.001 &&
                    static_cast<double>(n) >= 855.0 * 0.98 &&
                    static_cast<double>(n) <= 855.0 * 1.02;
    CHECK(report_criterion(
        1, "DP design: variances (0.227, 0.246) +-0.001, n within 2% of 855 (got n=" +
               std::to_string(n) + ")",
        ok, timer.seconds()));
}

TEST_CASE("criterion 2: coarser tau stays in the reference bracket") {
    Timer timer;
    cli::Overrides overrides;
    overrides.tau = 0.09;
    const cli::ReportDocument report =
        cli::cmd_design(kConfigDir + "/dp_design_example.ini", overrides);
    const auto n = report.outputs.at("n_total").get<std::uint64_t>();
    const bool ok = n >= 830 && n <= 930;
    CHECK(report_criterion(
        2, "DP design at tau=0.09: n in [830, 930] (got n=" + std::to_string(n) + ")",
        ok, timer.seconds()));
}

TEST_CASE("criterion 3: Monte Carlo variances match the closed forms") {
    Timer timer;
    const std::uint64_t n = 100000;
    const std::uint64_t replicates = 10000;
    bool ok = true;
    double worst = 0.0;
    std::string worst_at = "-";
    std::uint64_t scenario_index = 0;
    for (const GroupRates& r : scenario_grid()) {
        const auto profile =
            empirical_variance_profile(r, n, replicates, 971100 + scenario_index);
        for (const MetricKind kind : kAllKinds) {
            const VarianceCheck& check = profile.at(kind);
            const double closed = group_variance(kind, r);
            const double rel = std::fabs(check.scaled_variance - closed) / closed;
            if (rel > worst) {
                worst = rel;
                worst_at = std::string(to_string(kind)) + "@scenario" +
                           std::to_string(scenario_index);
            }
            ok = ok && check.replicates_used == replicates && rel < 0.05;
        }
        ++scenario_index;
    }
    std::ostringstream detail;
    detail << "n*Var_emp vs closed form over " << scenario_index
           << " scenarios x 8 metrics, worst rel err " << worst << " at " << worst_at;
    CHECK(report_criterion(3, detail.str(), ok, timer.seconds()));
}

TEST_CASE("criterion 4: delta engine equals closed forms to 1e-12") {
    Timer timer;
    bool ok = true;
    double worst = 0.0;
    for (const GroupRates& r : scenario_grid()) {
        for (const MetricKind kind : kAllKinds) {
            const auto [grad, cov] = metric_joint_covariance(kind, r);
            const double diff =
                std::fabs(delta_variance(grad, cov) - group_variance(kind, r));
            worst = std::max(worst, diff);
            ok = ok && diff < 1e-12;
        }
    }
    std::ostringstream detail;
    detail << "gradient/covariance route vs closed forms, worst abs diff " << worst;
    CHECK(report_criterion(4, detail.str(), ok, timer.seconds()));
}

namespace {

struct PowerScenario {
    const char* name;
    MetricKind metric;
    GroupRates alt_g1, alt_g2;   // true gap equals the designed tau
    GroupRates null_g1, null_g2; // true gap equals u_tol
    double u_tol;
};

std::vector<PowerScenario> power_scenarios() {
    std::vector<PowerScenario> list;
    list.push_back({"DP income model", MetricKind::DP,
                    GroupRates::from_parameters(0.5, 0.4404, 0.5596),
                    GroupRates::from_parameters(0.5, 0.3478, 0.6522),
                    GroupRates::from_parameters(0.5, 0.4404, 0.5596),
                    GroupRates::from_parameters(0.5, 0.4404, 0.5596), 0.0});
    list.push_back({"TPR gap", MetricKind::TPR,
                    GroupRates::from_parameters(0.5, 0.79, 0.85),
                    GroupRates::from_parameters(0.4, 0.68, 0.8),
                    GroupRates::from_parameters(0.5, 0.79, 0.85),
                    GroupRates::from_parameters(0.4, 0.79, 0.8), 0.0});
    list.push_back({"PPV gap", MetricKind::PPV,
                    GroupRates::from_parameters(0.5, 0.8, 0.6),
                    GroupRates::from_parameters(0.45, 0.7, 0.65),
                    GroupRates::from_parameters(0.5, 0.8, 0.6),
                    GroupRates::from_parameters(0.5, 0.8, 0.6), 0.0});
    list.push_back({"TNR gap", MetricKind::TNR,
                    GroupRates::from_parameters(0.3, 0.7, 0.9),
                    GroupRates::from_parameters(0.35, 0.75, 0.85),
                    GroupRates::from_parameters(0.3, 0.7, 0.9),
                    GroupRates::from_parameters(0.35, 0.75, 0.9), 0.0});
    list.push_back({"ACC gap", MetricKind::ACC,
                    GroupRates::from_parameters(0.5, 0.85, 0.8),
                    GroupRates::from_parameters(0.5, 0.75, 0.7),
                    GroupRates::from_parameters(0.5, 0.85, 0.8),
                    GroupRates::from_parameters(0.5, 0.8, 0.85), 0.0});
    // Non-zero tolerance: power sized for a gap of 0.10 against u_tol 0.05,
    // null at a true gap exactly equal to the tolerance.
    list.push_back({"DP with tolerance", MetricKind::DP,
                    GroupRates::from_parameters(0.5, 0.50, 0.50),
                    GroupRates::from_parameters(0.5, 0.40, 0.60),
                    GroupRates::from_parameters(0.5, 0.45, 0.55),
                    GroupRates::from_parameters(0.5, 0.40, 0.60), 0.05});
    return list;
}

} // namespace

TEST_CASE("criterion 5: simulated power and size match the design targets") {
    Timer timer;
    bool ok = true;
    std::ostringstream detail;
    detail << "power within 0.03 of 0.8 and null rate in the 99% band: ";
    const std::uint64_t replicates = 10000;
    // 99% binomial band around alpha/2 = 0.025 at 10000 replicates.
    const double band = normal_quantile(0.995) *
                        std::sqrt(0.025 * 0.975 / static_cast<double>(replicates));
    std::uint64_t seed = 52000;
    for (const PowerScenario& scenario : power_scenarios()) {
        AuditDesignInput input;
        input.metric = scenario.metric;
        input.alpha = Probability(0.05);
        input.beta = Probability(0.2);
        input.u_tol = scenario.u_tol;
        input.tau = metric_value(scenario.metric, scenario.alt_g1) -
                    metric_value(scenario.metric, scenario.alt_g2);
        input.rates_g1 = scenario.alt_g1;
        input.rates_g2 = scenario.alt_g2;
        const AuditDesignOutput design = sample_size(input);

        SimConfig sim;
        sim.metric = scenario.metric;
        sim.alpha = input.alpha;
        sim.u_tol = scenario.u_tol;
        sim.n1 = design.n1;
        sim.n2 = design.n2;
        sim.replicates = replicates;
        sim.master_seed = ++seed;
        sim.population.rates_g1 = scenario.alt_g1;
        sim.population.rates_g2 = scenario.alt_g2;
        const SimResult alt = run_replicates(sim);

        sim.population.rates_g1 = scenario.null_g1;
        sim.population.rates_g2 = scenario.null_g2;
        sim.master_seed = ++seed;
        const SimResult null_case = run_replicates(sim);

        const bool power_ok = std::fabs(alt.rejection_rate - 0.8) <= 0.03;
        const bool size_ok = std::fabs(null_case.rejection_rate - 0.025) <= band;
        ok = ok && power_ok && size_ok && alt.undefined_replicates == 0;
        detail << scenario.name << " (n=" << design.n_total
               << ", power=" << alt.rejection_rate
               << ", null=" << null_case.rejection_rate << ") ";
    }
    CHECK(report_criterion(5, detail.str(), ok, timer.seconds()));
}

TEST_CASE("criterion 6: Neyman allocation minimizes the required size") {
    Timer timer;
    std::mt19937 gen(660901);
    std::uniform_real_distribution<double> sigma_dist(0.02, 0.7);
    std::uniform_real_distribution<double> tau_dist(0.01, 0.5);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const double s1 = sigma_dist(gen), s2 = sigma_dist(gen);
        const double tau = tau_dist(gen);
        const double p_star = optimal_allocation(s1, s2);
        const double at_star =
            required_sample_size_real(s1 * s1, s2 * s2, 0.05, 0.2, 0.0, tau, p_star);
        for (int i = 1; i <= 99; ++i) {
            const double at_p = required_sample_size_real(s1 * s1, s2 * s2, 0.05,
                                                          0.2, 0.0, tau, i / 100.0);
            ok = ok && at_star <= at_p * (1.0 + 1e-12) + 1e-12;
        }
    }
    CHECK(report_criterion(
        6, "100 random (sigma1, sigma2, tau) triples against a 0.01-step grid", ok,
        timer.seconds()));
}

TEST_CASE("criterion 7: normal quantile accuracy") {
    Timer timer;
    bool ok = true;
    double worst = 0.0;
    for (double p = 1e-6; p < 1e-2; p *= 1.2) {
        for (const double q : {p, 1.0 - p}) {
            const double err = std::fabs(normal_cdf(normal_quantile(q)) - q);
            worst = std::max(worst, err);
        }
    }
    for (int i = 1; i < 2000; ++i) {
        const double p = i / 2000.0;
        const double err = std::fabs(normal_cdf(normal_quantile(p)) - p);
        worst = std::max(worst, err);
    }
    ok = ok && worst < 1e-10;

    // Bisection of normal_cdf as the quantile oracle.
    auto bisect = [](double p) {
        double lo = -10.0, hi = 10.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (normal_cdf(mid) < p) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    ok = ok && std::fabs(normal_quantile(0.975) - bisect(0.975)) < 1e-8;
    ok = ok && std::fabs(normal_quantile(0.8) - bisect(0.8)) < 1e-8;

    std::ostringstream detail;
    detail << "round trip below 1e-10 (worst " << worst
           << "); quantiles at 0.975 and 0.8 match bisection to 1e-8";
    CHECK(report_criterion(7, detail.str(), ok, timer.seconds()));
}

TEST_CASE("criterion 8: CLI determinism and the golden report") {
    Timer timer;
    const std::string sim_args = "simulate '" + kConfigDir +
                                 "/dp_simulate_example.ini' --json";
    const RunResult first = run_cli(sim_args);
    const RunResult second = run_cli(sim_args);
    bool ok = first.exit_code == 0 && second.exit_code == 0 &&
              !first.stdout_bytes.empty() &&
              first.stdout_bytes == second.stdout_bytes;

    const RunResult golden_run = run_cli(
        "test audit_small.csv --metric DP --u-tol 0 --alpha 0.05 "
        "--privileged-group A --json",
        kDataDir);
    const std::string golden = read_file(kGoldenDir + "/test_report.json");
    ok = ok && golden_run.exit_code == 0 && golden_run.stdout_bytes == golden;

    CHECK(report_criterion(
        8, "byte-identical simulate reruns; golden test report reproduced", ok,
        timer.seconds()));
}
