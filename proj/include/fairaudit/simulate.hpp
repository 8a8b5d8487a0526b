#pragma once

#include "fairaudit/confusion.hpp"
#include "fairaudit/statsmath.hpp"

#include <cstdint>
#include <map>

namespace fairaudit {

// SplitMix64: a counter-based 64-bit generator (Steele, Lea & Flood's
// SplittableRandom mixing function; public-domain constants by Vigna).
// The state is a plain counter advanced by the golden-ratio increment and
// each output is a bijective mix of it, so streams can be split by key
// derivation and the full period is 2^64.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Deterministic stream seed for (master_seed, replicate, group). Each input
// is folded through the SplitMix64 mixing function, so any two distinct
// triples land in unrelated streams regardless of execution order.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t replicate,
                                 std::uint64_t group);

// The two group populations a synthetic audit samples from.
struct PopulationSpec {
    GroupRates rates_g1;
    GroupRates rates_g2;
};

struct SimConfig {
    PopulationSpec population;
    MetricKind metric = MetricKind::DP;
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;
    std::uint64_t replicates = 0;
    std::uint64_t master_seed = 0;
    Probability alpha{0.05};
    double u_tol = 0.0;
};

struct SimResult {
    double rejection_rate = 0.0;
    double mean_u_hat = 0.0;
    // n_g times the sample variance of the per-replicate group metric
    // estimates; NaN when fewer than two usable replicates.
    double empirical_var_g1 = 0.0;
    double empirical_var_g2 = 0.0;
    // Replicates where the metric was undefined in a group or the test
    // statistic degenerate; excluded from all rates above.
    std::uint64_t undefined_replicates = 0;
    std::uint64_t replicates_used = 0;

    bool operator==(const SimResult&) const = default;
};

// One stratified group sample: n individuals drawn independently as
// Y ~ Bernoulli(prevalence), then Yhat ~ Bernoulli(tpr) for positives and
// Yhat ~ Bernoulli(1 - tnr) for negatives, tallied into the four cells.
// Deterministic given the seed.
ConfusionCounts draw_group_sample(const GroupRates& rates, std::uint64_t n,
                                  std::uint64_t seed);

// Draws both groups and runs the unfairness test for every replicate,
// tallying rejections and metric estimates. Replicate i, group g uses the
// stream derive_stream_seed(master_seed, i, g), and results land in
// pre-assigned slots reduced in replicate order, so the output is
// bit-identical for any thread count. OpenMP-parallel across replicates.
SimResult run_replicates(const SimConfig& cfg);

// Plain single-threaded reference implementation; must produce bit-identical
// results to run_replicates.
SimResult run_replicates_serial(const SimConfig& cfg);

struct VarianceCheck {
    double scaled_variance = 0.0; // n x sample variance of the estimates
    std::uint64_t replicates_used = 0;
    std::uint64_t undefined_replicates = 0;
};

// Empirical check of every metric's group variance from one shared set of
// draws: each replicate is drawn once and all metric estimates are computed
// from the same counts. Metrics undefined on a replicate are excluded and
// counted per metric. OpenMP-parallel across replicates.
std::map<MetricKind, VarianceCheck>
empirical_variance_profile(const GroupRates& rates, std::uint64_t n,
                           std::uint64_t replicates, std::uint64_t master_seed);

// Serial reference for empirical_variance_profile.
std::map<MetricKind, VarianceCheck>
empirical_variance_profile_serial(const GroupRates& rates, std::uint64_t n,
                                  std::uint64_t replicates,
                                  std::uint64_t master_seed);

// n x sample variance of one metric's estimates over the replicates, the
// direct comparand for group_variance. Throws DegenerateStatsError when more
// than half of the replicates leave the metric undefined.
double empirical_variance_check(MetricKind kind, const GroupRates& rates,
                                std::uint64_t n, std::uint64_t replicates,
                                std::uint64_t master_seed);

} // namespace fairaudit
