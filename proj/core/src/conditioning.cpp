#include "condmode/conditioning.hpp"

#include "condmode/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace condmode {

void PruneConfig::validate() const {
    if (!(relative_threshold >= 0.0 && relative_threshold < 1.0)) {
        throw std::invalid_argument("PruneConfig: relative_threshold must lie in [0, 1)");
    }
}

ConditionalMixture condition(const JointKernelModel& model, const Point& x,
                             const PruneConfig& prune) {
    model.validate();
    prune.validate();
    if (x.dim() != model.dx) {
        throw std::invalid_argument("condition: query dimension mismatch");
    }

    const std::size_t m = model.size();
    const double neg_inf = -std::numeric_limits<double>::infinity();

    // Unnormalized log weights log(a_i) + log phi_i(x - xc_i).
    std::vector<double> log_w(m, neg_inf);
    Point off{std::vector<double>(model.dx)};
    double max_log = neg_inf;
    for (std::size_t i = 0; i < m; ++i) {
        if (model.weights[i] <= 0.0) continue;
        for (std::size_t k = 0; k < model.dx; ++k) off[k] = x[k] - model.x_centers[i][k];
        log_w[i] = std::log(model.weights[i]) +
                   log_gaussian_kernel_eval(off, model.x_bandwidths[i]);
        if (log_w[i] > max_log) max_log = log_w[i];
    }
    if (!(max_log > neg_inf)) {
        throw OutsideSupportError("condition: query outside model support");
    }

    // Shift so the largest weight is exactly 1, prune relative to it,
    // renormalize the survivors.
    ConditionalMixture result;
    result.query = x;
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double w = std::exp(log_w[i] - max_log);
        if (w < prune.relative_threshold) continue;
        result.source_indices.push_back(i);
        result.mixture.weights.push_back(w);
        result.mixture.centers.push_back(model.y_centers[i]);
        result.mixture.bandwidths.push_back(model.y_bandwidths[i]);
        sum += w;
    }
    for (double& w : result.mixture.weights) w /= sum;
    return result;
}

double conditional_density_eval(const JointKernelModel& model, const Point& x,
                                const Point& y) {
    const ConditionalMixture cond = condition(model, x, no_pruning());
    return mixture_density_eval(cond.mixture, y);
}

} // namespace condmode
