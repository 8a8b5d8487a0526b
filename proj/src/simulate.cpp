#include "fairaudit/simulate.hpp"

#include "fairaudit/hypotest.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace fairaudit {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// All metric kinds, in a fixed order for slot arrays.
constexpr std::array<MetricKind, 8> kAllMetrics = {
    MetricKind::DP,  MetricKind::TPR, MetricKind::FNR, MetricKind::TNR,
    MetricKind::FPR, MetricKind::PPV, MetricKind::NPV, MetricKind::ACC,
};

// Per-replicate outcome slot for run_replicates.
struct ReplicateSlot {
    double u_hat = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    bool defined = false;
    bool reject = false;
};

void fill_replicate_slot(const SimConfig& cfg, std::uint64_t replicate,
                         ReplicateSlot& slot) {
    const ConfusionCounts c1 = draw_group_sample(
        cfg.population.rates_g1, cfg.n1,
        derive_stream_seed(cfg.master_seed, replicate, 0));
    const ConfusionCounts c2 = draw_group_sample(
        cfg.population.rates_g2, cfg.n2,
        derive_stream_seed(cfg.master_seed, replicate, 1));
    const GroupRates r1 = rates_from_counts(c1);
    const GroupRates r2 = rates_from_counts(c2);
    try {
        const TestOutcome outcome =
            run_test(cfg.metric, r1, cfg.n1, r2, cfg.n2, cfg.u_tol, cfg.alpha);
        slot.u_hat = outcome.u_hat;
        slot.m1 = *try_metric_value(cfg.metric, r1);
        slot.m2 = *try_metric_value(cfg.metric, r2);
        slot.reject = outcome.reject;
        slot.defined = true;
    } catch (const DegenerateStatsError&) {
        slot.defined = false;
    }
}

// Reduce slots in replicate order; the reduction is what fixes the result
// independent of how the slots were filled.
SimResult reduce_slots(const std::vector<ReplicateSlot>& slots,
                       std::uint64_t n1, std::uint64_t n2) {
    SimResult result;
    std::uint64_t used = 0;
    std::uint64_t rejections = 0;
    double sum_u = 0.0, sum_m1 = 0.0, sum_m2 = 0.0;
    for (const auto& s : slots) {
        if (!s.defined) continue;
        ++used;
        rejections += s.reject ? 1 : 0;
        sum_u += s.u_hat;
        sum_m1 += s.m1;
        sum_m2 += s.m2;
    }
    result.replicates_used = used;
    result.undefined_replicates = slots.size() - used;
    if (used == 0) {
        throw DegenerateStatsError(
            "every replicate left the metric undefined or degenerate; the "
            "scenario cannot be simulated at this sample size");
    }
    result.rejection_rate =
        static_cast<double>(rejections) / static_cast<double>(used);
    result.mean_u_hat = sum_u / static_cast<double>(used);

    if (used >= 2) {
        const double mean_m1 = sum_m1 / static_cast<double>(used);
        const double mean_m2 = sum_m2 / static_cast<double>(used);
        double ss1 = 0.0, ss2 = 0.0;
        for (const auto& s : slots) {
            if (!s.defined) continue;
            ss1 += (s.m1 - mean_m1) * (s.m1 - mean_m1);
            ss2 += (s.m2 - mean_m2) * (s.m2 - mean_m2);
        }
        const double denom = static_cast<double>(used - 1);
        result.empirical_var_g1 = static_cast<double>(n1) * ss1 / denom;
        result.empirical_var_g2 = static_cast<double>(n2) * ss2 / denom;
    } else {
        result.empirical_var_g1 = std::numeric_limits<double>::quiet_NaN();
        result.empirical_var_g2 = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

// Surface config and rate problems before the parallel region; exceptions
// must not cross an OpenMP loop boundary.
void require_generative_rates(const GroupRates& rates, const char* which) {
    if (!rates.has_prevalence() || !rates.has_tpr() || !rates.has_tnr()) {
        throw ValidationError(std::string("simulation requires the full "
                                          "(prevalence, tpr, tnr) triple for ") +
                              which);
    }
}

void validate_sim_config(const SimConfig& cfg) {
    if (cfg.replicates == 0) {
        throw ValidationError("replicates must be >= 1");
    }
    if (cfg.n1 == 0 || cfg.n2 == 0) {
        throw ValidationError("group sample sizes must be >= 1");
    }
    if (!(cfg.alpha.value() > 0.0 && cfg.alpha.value() < 1.0)) {
        throw ValidationError("alpha must lie strictly inside (0, 1)");
    }
    require_generative_rates(cfg.population.rates_g1, "group 1");
    require_generative_rates(cfg.population.rates_g2, "group 2");
}

// Per-replicate metric estimates for the variance profile.
struct ProfileSlot {
    std::array<double, kAllMetrics.size()> estimate{};
    std::array<bool, kAllMetrics.size()> defined{};
};

void fill_profile_slot(const GroupRates& rates, std::uint64_t n,
                       std::uint64_t master_seed, std::uint64_t replicate,
                       ProfileSlot& slot) {
    const ConfusionCounts counts =
        draw_group_sample(rates, n, derive_stream_seed(master_seed, replicate, 0));
    const GroupRates observed = rates_from_counts(counts);
    for (std::size_t k = 0; k < kAllMetrics.size(); ++k) {
        if (const auto v = try_metric_value(kAllMetrics[k], observed)) {
            slot.estimate[k] = *v;
            slot.defined[k] = true;
        }
    }
}

std::map<MetricKind, VarianceCheck>
reduce_profile_slots(const std::vector<ProfileSlot>& slots, std::uint64_t n) {
    std::map<MetricKind, VarianceCheck> profile;
    for (std::size_t k = 0; k < kAllMetrics.size(); ++k) {
        VarianceCheck check;
        double sum = 0.0;
        for (const auto& s : slots) {
            if (!s.defined[k]) continue;
            ++check.replicates_used;
            sum += s.estimate[k];
        }
        check.undefined_replicates = slots.size() - check.replicates_used;
        if (check.replicates_used >= 2) {
            const double mean = sum / static_cast<double>(check.replicates_used);
            double ss = 0.0;
            for (const auto& s : slots) {
                if (!s.defined[k]) continue;
                ss += (s.estimate[k] - mean) * (s.estimate[k] - mean);
            }
            check.scaled_variance = static_cast<double>(n) * ss /
                                    static_cast<double>(check.replicates_used - 1);
        } else {
            check.scaled_variance = std::numeric_limits<double>::quiet_NaN();
        }
        profile.emplace(kAllMetrics[k], check);
    }
    return profile;
}

} // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t replicate,
                                 std::uint64_t group) {
    std::uint64_t h = mix64(master_seed + kGolden);
    h = mix64(h + kGolden * (replicate + 1));
    h = mix64(h + kGolden * (group + 1));
    return h;
}

ConfusionCounts draw_group_sample(const GroupRates& rates, std::uint64_t n,
                                  std::uint64_t seed) {
    if (n == 0) {
        throw ValidationError("group sample size must be >= 1");
    }
    const double prevalence = rates.prevalence();
    const double tpr = rates.tpr();
    const double fpr = 1.0 - rates.tnr();

    SplitMix64 rng(seed);
    // Branchless tally: cells[2*Y + Yhat] = {TN, FP, FN, TP}.
    std::uint64_t cells[4] = {0, 0, 0, 0};
    for (std::uint64_t i = 0; i < n; ++i) {
        const bool positive = rng.next_double() < prevalence;
        const bool predicted = rng.next_double() < (positive ? tpr : fpr);
        ++cells[(positive ? 2u : 0u) | (predicted ? 1u : 0u)];
    }
    ConfusionCounts counts;
    counts.tn = cells[0];
    counts.fp = cells[1];
    counts.fn = cells[2];
    counts.tp = cells[3];
    return counts;
}

SimResult run_replicates(const SimConfig& cfg) {
    validate_sim_config(cfg);
    std::vector<ReplicateSlot> slots(cfg.replicates);
    const std::int64_t count = static_cast<std::int64_t>(cfg.replicates);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        fill_replicate_slot(cfg, static_cast<std::uint64_t>(i), slots[i]);
    }
    return reduce_slots(slots, cfg.n1, cfg.n2);
}

SimResult run_replicates_serial(const SimConfig& cfg) {
    validate_sim_config(cfg);
    std::vector<ReplicateSlot> slots(cfg.replicates);
    for (std::uint64_t i = 0; i < cfg.replicates; ++i) {
        fill_replicate_slot(cfg, i, slots[i]);
    }
    return reduce_slots(slots, cfg.n1, cfg.n2);
}

std::map<MetricKind, VarianceCheck>
empirical_variance_profile(const GroupRates& rates, std::uint64_t n,
                           std::uint64_t replicates, std::uint64_t master_seed) {
    if (replicates == 0) throw ValidationError("replicates must be >= 1");
    if (n == 0) throw ValidationError("group sample size must be >= 1");
    require_generative_rates(rates, "the group");
    std::vector<ProfileSlot> slots(replicates);
    const std::int64_t count = static_cast<std::int64_t>(replicates);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        fill_profile_slot(rates, n, master_seed, static_cast<std::uint64_t>(i),
                          slots[i]);
    }
    return reduce_profile_slots(slots, n);
}

std::map<MetricKind, VarianceCheck>
empirical_variance_profile_serial(const GroupRates& rates, std::uint64_t n,
                                  std::uint64_t replicates,
                                  std::uint64_t master_seed) {
    if (replicates == 0) throw ValidationError("replicates must be >= 1");
    if (n == 0) throw ValidationError("group sample size must be >= 1");
    require_generative_rates(rates, "the group");
    std::vector<ProfileSlot> slots(replicates);
    for (std::uint64_t i = 0; i < replicates; ++i) {
        fill_profile_slot(rates, n, master_seed, i, slots[i]);
    }
    return reduce_profile_slots(slots, n);
}

double empirical_variance_check(MetricKind kind, const GroupRates& rates,
                                std::uint64_t n, std::uint64_t replicates,
                                std::uint64_t master_seed) {
    const auto profile = empirical_variance_profile(rates, n, replicates, master_seed);
    const VarianceCheck& check = profile.at(kind);
    if (2 * check.undefined_replicates > replicates) {
        throw DegenerateStatsError(
            std::string(to_string(kind)) + " was undefined in " +
            std::to_string(check.undefined_replicates) + " of " +
            std::to_string(replicates) +
            " replicates; the empirical variance is unreliable at this sample size");
    }
    if (check.replicates_used < 2) {
        throw DegenerateStatsError(
            "a sample variance needs at least two usable replicates");
    }
    return check.scaled_variance;
}

} // namespace fairaudit
