#pragma once

#include "condmode/conditioning.hpp"
#include "condmode/density.hpp"
#include "condmode/mode_search.hpp"
#include "condmode/random.hpp"

#include <cstddef>
#include <vector>

namespace condmode {

struct DataRow {
    Point x;
    Point y;
};

/// Paired samples with a declared input/output dimension split.
struct Dataset {
    std::size_t dx = 0;
    std::size_t dy = 0;
    std::vector<DataRow> rows;

    std::size_t size() const { return rows.size(); }
    void validate() const; // throws std::invalid_argument
};

/// Everything needed to turn a fitted model into a predictor.
struct RegressorConfig {
    Bandwidth bandwidth;  // joint smoothness, dimension dx + dy (used by fits)
    SearchConfig search;
    PruneConfig prune;
};

/// Kernel density estimate over the data: one kernel per sample, weight 1/n,
/// the shared bandwidth split into its x- and y-parts.
JointKernelModel fit_kde(const Dataset& data, const Bandwidth& bandwidth);

/// Leave-one-out log-likelihood sum_i log p_{-i}(x_i, y_i), where p_{-i} is
/// the KDE fit with row i removed. Computed in the log domain; -inf when
/// every held-out point is unreachable under the bandwidth.
double loo_log_likelihood(const Dataset& data, const Bandwidth& bandwidth);

/// Picks the grid bandwidth maximizing the leave-one-out log-likelihood.
/// Ties (including the all -inf degenerate case) resolve to the
/// lexicographically smallest candidate. Requires n >= 2 and a nonempty grid.
Bandwidth select_bandwidth_loo(const Dataset& data, const std::vector<Bandwidth>& grid);

/// Regression by the global mode of the conditional density at x.
/// Propagates OutsideSupportError for queries beyond the model support.
Point predict_mode(const JointKernelModel& model, const Point& x,
                   const RegressorConfig& cfg, Seed seed);

/// Nadaraya-Watson regression: the conditional expectation, i.e. the
/// conditioned-weight average of the y-centers.
Point predict_nw(const JointKernelModel& model, const Point& x,
                 const PruneConfig& prune = PruneConfig{});

} // namespace condmode
