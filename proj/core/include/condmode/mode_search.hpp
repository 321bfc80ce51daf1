#pragma once

#include "condmode/density.hpp"
#include "condmode/random.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace condmode {

/// Backtracking gradient-ascent parameters for the local refinement step.
struct AscentConfig {
    // Step length along the normalized gradient; when unset, 0.1 times the
    // smallest bandwidth component of the mixture being searched.
    std::optional<double> initial_step;
    int max_iterations = 200;
    double gradient_tolerance = 1e-8;
    double backtrack_factor = 0.5;

    void validate() const;
};

/// Configuration for the sampling-based global mode search.
struct SearchConfig {
    std::size_t q = 1000;  // candidate sample count
    bool refine = true;    // apply gradient ascent to the best candidate
    AscentConfig ascent;

    void validate() const;
};

/// Outcome of one global mode search.
struct ModeResult {
    Point argmax;                      // final maximizer (refined if enabled)
    double density = 0.0;              // mixture density at argmax
    Point best_sample;                 // best of the q sampled candidates
    double best_sample_density = 0.0;  // density at best_sample
    int ascent_iterations = 0;
    std::size_t candidates_evaluated = 0;
};

/// Inverse-CDF draw from a categorical distribution: returns the index i with
/// cumsum(weights)[i-1] <= u < cumsum(weights)[i]. Exhaustive over u in [0,1).
/// Throws std::invalid_argument unless the weights are nonnegative and sum to
/// one within 1e-9.
std::size_t categorical_draw(const std::vector<double>& weights, double u);

/// Draws q points distributed according to the mixture density, each by
/// (1) drawing a kernel index by weight, (2) drawing a standard-normal vector
/// scaled componentwise by that kernel's bandwidth, (3) shifting by the
/// kernel center. Deterministic given the seed.
std::vector<Point> sample_mixture(const Mixture& mix, std::size_t q, Seed seed);

/// Monotone gradient ascent on the mixture density from `start`: each
/// iteration moves along the normalized gradient with a backtracking step, so
/// the density never decreases. Stops when the gradient norm drops below
/// tolerance, the step underflows, or max_iterations is reached; always
/// returns the best point found.
Point gradient_ascent(const Mixture& mix, const Point& start,
                      const AscentConfig& cfg = AscentConfig{});

/// Global maximum search: draws q mixture-distributed candidates, takes the
/// densest one (ties: lowest sample index), and optionally refines it by
/// gradient ascent. Deterministic given (mix, cfg, seed).
ModeResult find_mode(const Mixture& mix, const SearchConfig& cfg = SearchConfig{},
                     Seed seed = Seed{});

} // namespace condmode
