#pragma once

#include "condmode/density.hpp"

#include <cstddef>
#include <vector>

namespace condmode {

/// Controls dropping of negligible kernels when conditioning. A kernel is
/// dropped when its conditional weight falls below relative_threshold times
/// the largest conditional weight; survivors are renormalized. The threshold
/// is relative so behavior does not depend on the model's scale.
struct PruneConfig {
    double relative_threshold = 1e-12;

    void validate() const; // requires 0 <= relative_threshold < 1
};

/// Pruning disabled; used where the full conditional is required.
inline PruneConfig no_pruning() { return PruneConfig{0.0}; }

/// The conditional density h(y) = p(y | x) of a joint kernel model at a
/// fixed query x, represented as a mixture over the retained y-kernels.
struct ConditionalMixture {
    Mixture mixture;                          // dimension dy
    std::vector<std::size_t> source_indices;  // retained kernel indices, ascending
    Point query;                              // the conditioning x
};

/// Builds the conditional mixture at x. Weights are computed as
///
///     w_i = a_i phi_i(x - xc_i) / sum_j a_j phi_j(x - xc_j)
///
/// entirely in the log domain, then pruned and renormalized.
///
/// Throws OutsideSupportError when every kernel's contribution vanishes even
/// in the log domain (x numerically infinitely far from all centers), and
/// std::invalid_argument on dimension mismatch.
ConditionalMixture condition(const JointKernelModel& model, const Point& x,
                             const PruneConfig& prune = PruneConfig{});

/// p(y | x) evaluated directly; equal to the density of the unpruned
/// conditional mixture at y, and to joint / marginal where the marginal is
/// representable.
double conditional_density_eval(const JointKernelModel& model, const Point& x,
                                const Point& y);

} // namespace condmode
