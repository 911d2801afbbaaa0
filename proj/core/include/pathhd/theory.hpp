#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathhd/hypervector.hpp"
#include "pathhd/table.hpp"

namespace pathhd {

// Monte Carlo checks of the concentration, capacity, separation, order
// sensitivity and linear-cost properties of the encoders.
//
// Every trial draws from its own counter-based stream, so results are
// identical for a given seed regardless of `threads`.

// 0 means std::thread::hardware_concurrency().
inline constexpr std::size_t kAutoThreads = 0;

// Config of an atom sampler at dimension d. GHRR needs d divisible by m².
HdcConfig sampler_config(Family family, std::size_t d, std::size_t block_size, std::uint64_t seed,
                         BlockFamily blocks = BlockFamily::HouseholderProduct);

// ---------------------------------------------------------------- tail

struct TailConfig {
    Family family = Family::BipolarXor;
    std::vector<std::size_t> dims{512, 2048, 8192};
    double epsilon = 0.1;
    std::size_t trials = 100000;
    std::size_t block_size = 4;  // GHRR only
    BlockFamily block_family = BlockFamily::HouseholderProduct;
    std::uint64_t seed = 0;
    std::size_t threads = kAutoThreads;

    // Throws ConfigError unless trials >= 1000, every d >= 64 (and divisible
    // by m² for GHRR), 0 < epsilon <= 1.
    void validate() const;
};

struct TailPoint {
    std::size_t d = 0;
    std::size_t trials = 0;
    std::size_t exceedances = 0;
    double rate = 0.0;          // exceedances / trials
    double std_error = 0.0;     // sqrt(rate (1 - rate) / trials)
    double hoeffding = 0.0;     // 2 exp(-epsilon² d / 2), the bipolar bound
};

struct TailExperiment {
    TailConfig config;
    std::vector<TailPoint> points;  // in config.dims order
    // c in rate ≈ 2 exp(-c d ε²), least squares through the origin of
    // -log(rate / 2) against d ε² over points with a nonzero rate.
    // NaN when no point has a nonzero rate.
    double fitted_c = 0.0;
    std::size_t fit_points = 0;
    // rate never increases along increasing d.
    bool monotone = true;
    // Same, allowing increases within two combined standard errors.
    bool monotone_2sigma = true;

    Table to_table() const;
};

TailExperiment run_tail_experiment(const TailConfig& cfg);

// ------------------------------------------------------------ capacity

struct CapacityConfig {
    Family family = Family::BipolarXor;
    std::size_t distractors = 1000;  // M
    double delta = 0.05;
    double epsilon = 0.2;
    double c = 0.5;                  // from a prior tail fit
    std::size_t trials = 200;
    std::size_t max_dimension = std::size_t{1} << 20;
    std::size_t block_size = 4;
    BlockFamily block_family = BlockFamily::HouseholderProduct;
    std::uint64_t seed = 0;
    std::size_t threads = kAutoThreads;

    // Throws ConfigError unless M >= 1, 0 < delta < 1, 0 < epsilon <= 1,
    // c > 0, trials >= 200.
    void validate() const;
};

struct CapacityProbe {
    std::size_t d = 0;
    double success_rate = 0.0;
};

struct CapacityExperiment {
    CapacityConfig config;
    // log(2M/δ) / (c ε²), rounded up.
    std::size_t predicted_d = 0;
    // Smallest d (a multiple of the family's granularity) at which a trial's
    // max |sim| over M distractors is <= ε in at least (1 - δ) of trials.
    // Empty when the search did not converge below max_dimension.
    std::optional<std::size_t> measured_d;
    bool converged = false;
    std::vector<CapacityProbe> probes;  // in search order

    Table to_table() const;
};

// Fraction of trials at dimension d whose max |sim| over M distractors is <= ε.
double capacity_success_rate(const CapacityConfig& cfg, std::size_t d);

CapacityExperiment run_capacity_experiment(const CapacityConfig& cfg);

// ---------------------------------------------------------- separation

struct SeparationConfig {
    std::size_t relations = 3;   // n
    std::size_t distractors = 100;  // M
    double epsilon = 0.2;
    double delta = 0.05;
    std::size_t trials = 500;
    std::uint64_t seed = 0;
    std::size_t threads = kAutoThreads;

    void validate() const;
    // ⌈(2/ε²) log(2M/δ)⌉
    std::size_t dimension() const;
};

struct SeparationExperiment {
    SeparationConfig config;
    std::size_t d = 0;
    std::size_t successes = 0;       // trials with max distractor |cos| <= ε
    std::size_t exact_matches = 0;   // trials with cos(q, p*) == 1 exactly
    double success_rate = 0.0;
    double max_abs_cos = 0.0;        // over all distractors of all trials

    bool passed() const noexcept {
        return exact_matches == config.trials && success_rate >= 1.0 - config.delta;
    }
    Table to_table() const;
};

// Bipolar only. Query q = r1 ⊙ … ⊙ rn; the positive p* is re-encoded from the
// same atoms; each distractor replaces a nonempty random subset of the n
// relations with fresh atoms, so it differs from the query in >= 1 relation.
SeparationExperiment run_separation_check(const SeparationConfig& cfg);

// --------------------------------------------------- order sensitivity

struct OrderConfig {
    std::vector<Family> families{Family::Ghrr, Family::Fhrr, Family::Hrr, Family::RealElementwise,
                                 Family::BipolarXor, Family::CommMix};
    std::vector<std::size_t> lengths{2, 3, 4};
    std::size_t trials = 500;
    std::size_t dimension = 4096;
    std::size_t block_size = 4;
    BlockFamily block_family = BlockFamily::HouseholderProduct;
    std::uint64_t seed = 0;
    std::size_t threads = kAutoThreads;

    // lengths within [2, 8], trials >= 1.
    void validate() const;
};

struct OrderRow {
    Family family = Family::Ghrr;
    std::size_t length = 0;
    double mean_sim = 0.0;
    double min_sim = 0.0;
    double max_sim = 0.0;
};

struct OrderExperiment {
    OrderConfig config;
    std::vector<OrderRow> rows;  // families × lengths, in config order

    const OrderRow& row(Family family, std::size_t length) const;
    Table to_table() const;
};

// Mean similarity between a random path encoding and the encoding of a
// random non-identity permutation of the same relations.
OrderExperiment run_order_sensitivity(const OrderConfig& cfg);

// ------------------------------------------------------------- scaling

struct ScalingConfig {
    std::vector<std::size_t> counts{1000, 2500, 5000, 10000};   // N
    std::vector<std::size_t> dims{1024, 2048, 4096, 8192};      // d
    std::size_t path_length = 3;
    std::size_t relations = 32;
    std::size_t repetitions = 12;
    std::size_t block_size = 4;
    std::uint64_t seed = 0;
    // Shortest cell time accepted as above timer resolution.
    double min_cell_seconds = 1e-4;
    // Each visit to a cell repeats the timing until this much time is spent.
    double min_visit_seconds = 0.2;
    // Untimed scoring before the first cell.
    double warmup_seconds = 0.5;

    // At least 4 values per axis, N >= 1, d divisible by m², and
    // relations^path_length >= max N so every candidate has its own schema.
    void validate() const;
};

struct ScalingCell {
    std::size_t n = 0;
    std::size_t d = 0;
    double seconds = 0.0;    // fastest repetition
    double predicted = 0.0;  // a·N·d + b
};

struct ScalingRun {
    ScalingConfig config;
    std::vector<ScalingCell> cells;  // counts-major
    double slope = 0.0;      // a, seconds per (candidate × dimension)
    double intercept = 0.0;  // b, seconds
    double r_squared = 0.0;
    double max_relative_deviation = 0.0;

    const ScalingCell& cell(std::size_t n, std::size_t d) const;
    Table to_table() const;
};

// Median wall time of one single-threaded score_candidates call over n
// candidates with distinct random schemas at dimension d.
double measure_scoring_seconds(std::size_t n, std::size_t d, const ScalingConfig& cfg);

// Throws ConfigError("timer resolution ...") when a cell is faster than
// min_cell_seconds.
ScalingRun run_scaling_benchmark(const ScalingConfig& cfg);

}  // namespace pathhd
