#include "condmode/mode_search.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace condmode {

void AscentConfig::validate() const {
    if (initial_step && !(*initial_step > 0.0 && std::isfinite(*initial_step))) {
        throw std::invalid_argument("AscentConfig: initial_step must be positive");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("AscentConfig: max_iterations must be >= 1");
    }
    if (!(gradient_tolerance > 0.0)) {
        throw std::invalid_argument("AscentConfig: gradient_tolerance must be positive");
    }
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
        throw std::invalid_argument("AscentConfig: backtrack_factor must lie in (0, 1)");
    }
}

void SearchConfig::validate() const {
    if (q < 1) throw std::invalid_argument("SearchConfig: q must be >= 1");
    ascent.validate();
}

std::size_t categorical_draw(const std::vector<double>& weights, double u) {
    if (weights.empty()) {
        throw std::invalid_argument("categorical_draw: empty weight vector");
    }
    if (!(u >= 0.0 && u < 1.0)) {
        throw std::invalid_argument("categorical_draw: u must lie in [0, 1)");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("categorical_draw: weights must be nonnegative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("categorical_draw: weights must sum to 1");
    }

    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (u < cum) return i;
    }
    // Rounding left the final cumulative sum a hair below u; fall back to the
    // last kernel that carries mass.
    for (std::size_t i = weights.size(); i-- > 0;) {
        if (weights[i] > 0.0) return i;
    }
    return weights.size() - 1;
}

std::vector<Point> sample_mixture(const Mixture& mix, std::size_t q, Seed seed) {
    mix.validate();
    if (q < 1) throw std::invalid_argument("sample_mixture: q must be >= 1");

    const std::size_t d = mix.dim();
    Rng rng(seed);
    std::vector<Point> samples;
    samples.reserve(q);
    for (std::size_t k = 0; k < q; ++k) {
        const std::size_t j = categorical_draw(mix.weights, rng.uniform());
        Point p{std::vector<double>(d)};
        for (std::size_t c = 0; c < d; ++c) {
            p[c] = mix.centers[j][c] + rng.normal() * mix.bandwidths[j][c];
        }
        samples.push_back(std::move(p));
    }
    return samples;
}

namespace {

double min_bandwidth_component(const Mixture& mix) {
    double lo = std::numeric_limits<double>::infinity();
    for (const Bandwidth& b : mix.bandwidths) {
        for (double s : b.scales) lo = std::min(lo, s);
    }
    return lo;
}

double norm2(const Point& p) {
    double s = 0.0;
    for (double v : p.coords) s += v * v;
    return std::sqrt(s);
}

struct AscentOutcome {
    Point point;
    double density = 0.0;
    int iterations = 0;
};

AscentOutcome ascend(const Mixture& mix, const Point& start, const AscentConfig& cfg) {
    cfg.validate();
    if (start.dim() != mix.dim()) {
        throw std::invalid_argument("gradient_ascent: dimension mismatch");
    }
    const double step0 = cfg.initial_step.value_or(0.1 * min_bandwidth_component(mix));
    const double step_floor = step0 * 1e-15;

    AscentOutcome out{start, mixture_density_eval(mix, start), 0};
    Point cand{std::vector<double>(start.dim())};
    for (; out.iterations < cfg.max_iterations; ++out.iterations) {
        const Point grad = mixture_gradient(mix, out.point);
        const double gn = norm2(grad);
        if (gn < cfg.gradient_tolerance) break;

        bool accepted = false;
        for (double step = step0; step >= step_floor; step *= cfg.backtrack_factor) {
            for (std::size_t k = 0; k < cand.dim(); ++k) {
                cand[k] = out.point[k] + step * grad[k] / gn;
            }
            const double fc = mixture_density_eval(mix, cand);
            if (fc > out.density) {
                out.point = cand;
                out.density = fc;
                accepted = true;
                break;
            }
        }
        if (!accepted) break; // step underflowed without improvement
    }
    return out;
}

} // namespace

Point gradient_ascent(const Mixture& mix, const Point& start, const AscentConfig& cfg) {
    mix.validate();
    return ascend(mix, start, cfg).point;
}

ModeResult find_mode(const Mixture& mix, const SearchConfig& cfg, Seed seed) {
    mix.validate();
    cfg.validate();

    const std::vector<Point> candidates = sample_mixture(mix, cfg.q, seed);

    ModeResult result;
    result.candidates_evaluated = candidates.size();
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double v = mixture_density_eval(mix, candidates[i]);
        if (v > best) { // ties keep the lowest index
            best = v;
            best_i = i;
        }
    }
    result.best_sample = candidates[best_i];
    result.best_sample_density = best;

    if (cfg.refine) {
        AscentOutcome refined = ascend(mix, result.best_sample, cfg.ascent);
        result.argmax = std::move(refined.point);
        result.density = refined.density;
        result.ascent_iterations = refined.iterations;
    } else {
        result.argmax = result.best_sample;
        result.density = result.best_sample_density;
    }
    return result;
}

} // namespace condmode
