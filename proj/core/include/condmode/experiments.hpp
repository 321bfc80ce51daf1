#pragma once

#include "condmode/conditioning.hpp"
#include "condmode/density.hpp"
#include "condmode/mode_search.hpp"
#include "condmode/random.hpp"
#include "condmode/regression.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace condmode::experiments {

/// Target curve of the benchmark with a clear functional dependency.
double sine_target(double x); // sin(x^(8/5)) on [0, 2 pi]

inline constexpr double kSineNoiseSigma = 0.2;
inline constexpr double kSineDomainHi = 6.283185307179586476; // 2 pi

// Two-branch generator constants. Branch A (+) carries probability 0.65,
// branch B (-) the rest; both sit at +-b(x) with b(x) = sin(x/2) lifted to at
// least 0.3 inside the central region, plus N(0, 0.1^2) noise.
inline constexpr double kAmbiguousBranchProb = 0.65;
inline constexpr double kAmbiguousNoiseSigma = 0.1;
inline constexpr double kAmbiguousBranchFloor = 0.3;
inline constexpr double kAmbiguousRegionLo = 0.5;
inline constexpr double kAmbiguousRegionHi = kSineDomainHi - 0.5;

/// Noiseless branch magnitude b(x) of the two-branch generator.
double ambiguous_branch_height(double x);

/// n rows of y = sin(x^(8/5)) + N(0, noise_sigma^2), x uniform on [0, 2 pi].
Dataset gen_sine_dataset(std::size_t n, double noise_sigma, Seed seed);

/// n rows of the two-branch generator; noise_sigma is exposed so tests can
/// disable the noise, the documented generator uses the default.
Dataset gen_ambiguous_dataset(std::size_t n, Seed seed,
                              double noise_sigma = kAmbiguousNoiseSigma);

/// True conditional density of the sine generator: a Gaussian in y around
/// sin(x^(8/5)) with scale noise_sigma.
double true_sine_conditional(double x, double y, double noise_sigma);

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t points = 0; // >= 2
};

/// Rectangular evaluation grid; total size is capped at 10^7 points.
struct GridSpec {
    std::vector<GridAxis> axes;

    std::size_t total_points() const;
    void validate() const; // throws std::invalid_argument
};

/// Exhaustive argmax of the mixture density over the grid. Ties resolve to
/// the lexicographically smallest grid point. Independent of find_mode; the
/// two are cross-checked against each other in the test suites.
Point brute_force_mode(const Mixture& mix, const GridSpec& grid);

/// Root mean squared Euclidean distance between paired point lists.
double rmse(const std::vector<Point>& predictions, const std::vector<Point>& truth);

struct ExperimentConfig {
    std::size_t n = 1000;
    double noise_sigma = kSineNoiseSigma; // generator noise (0.1 for ambiguous)
    Bandwidth bandwidth{{0.1, 0.1}};      // joint KDE smoothness
    std::size_t q = 1000;
    std::size_t query_count = 200;
    Seed dataset_seed{1};
    Seed predict_seed{2};
    PruneConfig prune;
    bool refine = true;
};

/// One evaluated query. For the sine experiment y_true is the target curve;
/// for the ambiguous experiment y_true is the branch height b(x).
struct QueryRecord {
    double x = 0.0;
    double y_mode = 0.0;
    double y_nw = 0.0;
    double y_true = 0.0;
    bool ok = true; // false: query was outside the model support
};

struct ExperimentSummary {
    std::size_t query_count = 0;
    std::size_t missing = 0;     // queries outside model support
    double mode_rmse = 0.0;      // ambiguous: RMS distance to the nearer branch
    double nw_rmse = 0.0;
    std::size_t mode_dead_zone = 0; // |prediction| < 0.5 b(x); ambiguous only
    std::size_t nw_dead_zone = 0;
};

struct ExperimentReport {
    std::string experiment; // "sine" | "ambiguous"
    ExperimentConfig config;
    double query_lo = 0.0;
    double query_hi = 0.0;
    std::vector<QueryRecord> records;
    ExperimentSummary summary;
};

/// Recomputes the summary from the per-query records; the stored summary of
/// any report equals this by construction.
ExperimentSummary summarize(const std::string& experiment,
                            const std::vector<QueryRecord>& records);

/// Fits a KDE to a fresh sine dataset and runs both predictors over evenly
/// spaced queries on [0.25, 2 pi - 0.25] (a margin is kept to the data
/// boundary where KDE estimates are biased). Queries outside the model
/// support are recorded as missing, not fatal.
ExperimentReport run_sine_experiment(const ExperimentConfig& cfg);

/// Same drill on the two-branch dataset, with queries on [0.75, 2 pi - 0.75]
/// inside the two-branch region; records per-query distance to the nearer
/// branch and dead-zone hits for both predictors.
ExperimentReport run_ambiguous_experiment(const ExperimentConfig& cfg);

} // namespace condmode::experiments
