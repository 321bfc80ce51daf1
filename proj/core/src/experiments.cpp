#include "condmode/experiments.hpp"

#include "condmode/errors.hpp"
#include "condmode/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace condmode::experiments {

namespace {

constexpr double kQueryMargin = 0.25;    // keep clear of the KDE boundary bias
constexpr double kAmbiguousQueryLo = 0.75;
constexpr double kAmbiguousQueryHi = kSineDomainHi - 0.75;
constexpr std::size_t kGridCap = 10'000'000;

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

} // namespace

double sine_target(double x) { return std::sin(std::pow(x, 8.0 / 5.0)); }

double ambiguous_branch_height(double x) {
    double b = std::sin(0.5 * x);
    if (x >= kAmbiguousRegionLo && x <= kAmbiguousRegionHi) {
        b = std::max(b, kAmbiguousBranchFloor);
    }
    return b;
}

Dataset gen_sine_dataset(std::size_t n, double noise_sigma, Seed seed) {
    if (n < 1) throw std::invalid_argument("gen_sine_dataset: n must be >= 1");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw std::invalid_argument("gen_sine_dataset: noise_sigma must be nonnegative");
    }
    Dataset data;
    data.dx = 1;
    data.dy = 1;
    data.rows.reserve(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform() * kSineDomainHi;
        const double y = sine_target(x) + rng.normal() * noise_sigma;
        data.rows.push_back({Point{{x}}, Point{{y}}});
    }
    return data;
}

Dataset gen_ambiguous_dataset(std::size_t n, Seed seed, double noise_sigma) {
    if (n < 1) throw std::invalid_argument("gen_ambiguous_dataset: n must be >= 1");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw std::invalid_argument("gen_ambiguous_dataset: noise_sigma must be nonnegative");
    }
    Dataset data;
    data.dx = 1;
    data.dy = 1;
    data.rows.reserve(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform() * kSineDomainHi;
        const double branch = rng.uniform() < kAmbiguousBranchProb ? 1.0 : -1.0;
        const double y = branch * ambiguous_branch_height(x) + rng.normal() * noise_sigma;
        data.rows.push_back({Point{{x}}, Point{{y}}});
    }
    return data;
}

double true_sine_conditional(double x, double y, double noise_sigma) {
    if (!(noise_sigma > 0.0)) {
        throw std::invalid_argument("true_sine_conditional: noise_sigma must be positive");
    }
    return gaussian_kernel_eval(Point{{y - sine_target(x)}}, Bandwidth{{noise_sigma}});
}

std::size_t GridSpec::total_points() const {
    std::size_t total = 1;
    for (const GridAxis& a : axes) total *= a.points;
    return total;
}

void GridSpec::validate() const {
    if (axes.empty()) throw std::invalid_argument("GridSpec: no axes");
    std::size_t total = 1;
    for (const GridAxis& a : axes) {
        if (!(a.lo < a.hi)) throw std::invalid_argument("GridSpec: lo must be < hi");
        if (a.points < 2) throw std::invalid_argument("GridSpec: points must be >= 2");
        if (total > kGridCap / a.points) {
            throw std::invalid_argument("GridSpec: grid exceeds the 1e7 point cap");
        }
        total *= a.points;
    }
}

Point brute_force_mode(const Mixture& mix, const GridSpec& grid) {
    mix.validate();
    grid.validate();
    const std::size_t d = grid.axes.size();
    if (d != mix.dim()) {
        throw std::invalid_argument("brute_force_mode: grid dimension mismatch");
    }

    // Walk the grid in lexicographic order (axis 0 most significant); with a
    // strict improvement test the first of any tied set wins, which is the
    // lexicographically smallest point.
    std::vector<std::size_t> idx(d, 0);
    Point p{std::vector<double>(d)};
    auto axis_value = [&grid](std::size_t k, std::size_t i) {
        const GridAxis& a = grid.axes[k];
        return a.lo + (a.hi - a.lo) * static_cast<double>(i) /
                          static_cast<double>(a.points - 1);
    };
    for (std::size_t k = 0; k < d; ++k) p[k] = axis_value(k, 0);

    Point best = p;
    double best_v = -std::numeric_limits<double>::infinity();
    for (;;) {
        const double v = mixture_density_eval(mix, p);
        if (v > best_v) {
            best_v = v;
            best = p;
        }
        std::size_t k = d;
        while (k-- > 0) {
            if (++idx[k] < grid.axes[k].points) {
                p[k] = axis_value(k, idx[k]);
                break;
            }
            idx[k] = 0;
            p[k] = axis_value(k, 0);
            if (k == 0) return best;
        }
    }
}

double rmse(const std::vector<Point>& predictions, const std::vector<Point>& truth) {
    if (predictions.empty() || predictions.size() != truth.size()) {
        throw std::invalid_argument("rmse: lists must be nonempty and equal length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i].dim() != truth[i].dim()) {
            throw std::invalid_argument("rmse: dimension mismatch");
        }
        for (std::size_t k = 0; k < predictions[i].dim(); ++k) {
            const double e = predictions[i][k] - truth[i][k];
            total += e * e;
        }
    }
    return std::sqrt(total / static_cast<double>(predictions.size()));
}

ExperimentSummary summarize(const std::string& experiment,
                            const std::vector<QueryRecord>& records) {
    const bool ambiguous = experiment == "ambiguous";
    ExperimentSummary s;
    s.query_count = records.size();
    double sq_mode = 0.0;
    double sq_nw = 0.0;
    std::size_t ok = 0;
    for (const QueryRecord& r : records) {
        if (!r.ok) {
            ++s.missing;
            continue;
        }
        ++ok;
        if (ambiguous) {
            const double b = r.y_true;
            const double dist_mode = std::min(std::abs(r.y_mode - b), std::abs(r.y_mode + b));
            const double dist_nw = std::min(std::abs(r.y_nw - b), std::abs(r.y_nw + b));
            sq_mode += dist_mode * dist_mode;
            sq_nw += dist_nw * dist_nw;
            if (std::abs(r.y_mode) < 0.5 * b) ++s.mode_dead_zone;
            if (std::abs(r.y_nw) < 0.5 * b) ++s.nw_dead_zone;
        } else {
            sq_mode += (r.y_mode - r.y_true) * (r.y_mode - r.y_true);
            sq_nw += (r.y_nw - r.y_true) * (r.y_nw - r.y_true);
        }
    }
    if (ok > 0) {
        s.mode_rmse = std::sqrt(sq_mode / static_cast<double>(ok));
        s.nw_rmse = std::sqrt(sq_nw / static_cast<double>(ok));
    }
    return s;
}

namespace {

ExperimentReport run_experiment(const std::string& experiment, const ExperimentConfig& cfg,
                                double query_lo, double query_hi) {
    if (cfg.query_count < 2) {
        throw std::invalid_argument("run_experiment: query_count must be >= 2");
    }
    const Dataset data =
        experiment == "ambiguous"
            ? gen_ambiguous_dataset(cfg.n, cfg.dataset_seed, cfg.noise_sigma)
            : gen_sine_dataset(cfg.n, cfg.noise_sigma, cfg.dataset_seed);
    const JointKernelModel model = fit_kde(data, cfg.bandwidth);

    RegressorConfig rcfg;
    rcfg.bandwidth = cfg.bandwidth;
    rcfg.search.q = cfg.q;
    rcfg.search.refine = cfg.refine;
    rcfg.prune = cfg.prune;

    ExperimentReport report;
    report.experiment = experiment;
    report.config = cfg;
    report.query_lo = query_lo;
    report.query_hi = query_hi;
    report.records.assign(cfg.query_count, QueryRecord{});

    const bool ambiguous = experiment == "ambiguous";
    parallel_for(cfg.query_count, [&](std::size_t i) {
        QueryRecord& rec = report.records[i];
        rec.x = query_lo + (query_hi - query_lo) * static_cast<double>(i) /
                               static_cast<double>(cfg.query_count - 1);
        rec.y_true = ambiguous ? ambiguous_branch_height(rec.x) : sine_target(rec.x);
        const Point query{{rec.x}};
        try {
            const Seed sub = derive_seed(cfg.predict_seed, i);
            rec.y_mode = predict_mode(model, query, rcfg, sub)[0];
            rec.y_nw = predict_nw(model, query, cfg.prune)[0];
        } catch (const OutsideSupportError&) {
            rec.ok = false;
            rec.y_mode = nan_value();
            rec.y_nw = nan_value();
        }
    });

    report.summary = summarize(experiment, report.records);
    return report;
}

} // namespace

ExperimentReport run_sine_experiment(const ExperimentConfig& cfg) {
    return run_experiment("sine", cfg, kQueryMargin, kSineDomainHi - kQueryMargin);
}

ExperimentReport run_ambiguous_experiment(const ExperimentConfig& cfg) {
    return run_experiment("ambiguous", cfg, kAmbiguousQueryLo, kAmbiguousQueryHi);
}

} // namespace condmode::experiments
