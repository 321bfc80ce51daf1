#include "condmode/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace condmode {

void Dataset::validate() const {
    if (dx < 1 || dy < 1) {
        throw std::invalid_argument("Dataset: dx and dy must be >= 1");
    }
    if (rows.empty()) {
        throw std::invalid_argument("Dataset: at least one row required");
    }
    for (const DataRow& r : rows) {
        if (r.x.dim() != dx || r.y.dim() != dy) {
            throw std::invalid_argument("Dataset: row dimension mismatch");
        }
        for (double v : r.x.coords) {
            if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite value");
        }
        for (double v : r.y.coords) {
            if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite value");
        }
    }
}

JointKernelModel fit_kde(const Dataset& data, const Bandwidth& bandwidth) {
    data.validate();
    bandwidth.validate();
    if (bandwidth.dim() != data.dx + data.dy) {
        throw std::invalid_argument("fit_kde: bandwidth dimension must be dx + dy");
    }

    Bandwidth bx{{bandwidth.scales.begin(), bandwidth.scales.begin() + data.dx}};
    Bandwidth by{{bandwidth.scales.begin() + data.dx, bandwidth.scales.end()}};

    JointKernelModel model;
    model.dx = data.dx;
    model.dy = data.dy;
    const std::size_t n = data.size();
    model.weights.assign(n, 1.0 / static_cast<double>(n));
    model.x_centers.reserve(n);
    model.y_centers.reserve(n);
    model.x_bandwidths.assign(n, bx);
    model.y_bandwidths.assign(n, by);
    for (const DataRow& r : data.rows) {
        model.x_centers.push_back(r.x);
        model.y_centers.push_back(r.y);
    }
    return model;
}

double loo_log_likelihood(const Dataset& data, const Bandwidth& bandwidth) {
    data.validate();
    bandwidth.validate();
    const std::size_t n = data.size();
    const std::size_t d = data.dx + data.dy;
    if (bandwidth.dim() != d) {
        throw std::invalid_argument("loo_log_likelihood: bandwidth dimension must be dx + dy");
    }
    if (n < 2) {
        throw std::invalid_argument("loo_log_likelihood: needs at least 2 rows");
    }

    // Joint-space coordinates per row.
    std::vector<std::vector<double>> z(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(data.rows[i].x.coords.begin(), data.rows[i].x.coords.end(), z[i].begin());
        std::copy(data.rows[i].y.coords.begin(), data.rows[i].y.coords.end(),
                  z[i].begin() + data.dx);
    }

    const double neg_inf = -std::numeric_limits<double>::infinity();
    const double log_m = std::log(static_cast<double>(n - 1));
    double total = 0.0;
    Point off{std::vector<double>(d)};
    std::vector<double> logs(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = 0;
        double max_log = neg_inf;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < d; ++k) off[k] = z[i][k] - z[j][k];
            logs[c] = log_gaussian_kernel_eval(off, bandwidth);
            max_log = std::max(max_log, logs[c]);
            ++c;
        }
        if (!(max_log > neg_inf)) return neg_inf;
        double sum = 0.0;
        for (double l : logs) sum += std::exp(l - max_log);
        total += max_log + std::log(sum) - log_m;
    }
    return total;
}

Bandwidth select_bandwidth_loo(const Dataset& data, const std::vector<Bandwidth>& grid) {
    if (grid.empty()) {
        throw std::invalid_argument("select_bandwidth_loo: empty candidate grid");
    }
    if (data.size() < 2) {
        throw std::invalid_argument("select_bandwidth_loo: needs at least 2 rows");
    }

    auto lex_less = [](const Bandwidth& a, const Bandwidth& b) {
        return std::lexicographical_compare(a.scales.begin(), a.scales.end(),
                                            b.scales.begin(), b.scales.end());
    };

    const Bandwidth* best = nullptr;
    double best_score = -std::numeric_limits<double>::infinity();
    bool have_score = false;
    for (const Bandwidth& cand : grid) {
        const double score = loo_log_likelihood(data, cand);
        if (!have_score || score > best_score ||
            (score == best_score && lex_less(cand, *best))) {
            best = &cand;
            best_score = score;
            have_score = true;
        }
    }
    return *best;
}

Point predict_mode(const JointKernelModel& model, const Point& x,
                   const RegressorConfig& cfg, Seed seed) {
    const ConditionalMixture cond = condition(model, x, cfg.prune);
    return find_mode(cond.mixture, cfg.search, seed).argmax;
}

Point predict_nw(const JointKernelModel& model, const Point& x, const PruneConfig& prune) {
    const ConditionalMixture cond = condition(model, x, prune);
    Point out{std::vector<double>(model.dy, 0.0)};
    for (std::size_t i = 0; i < cond.mixture.size(); ++i) {
        const double w = cond.mixture.weights[i];
        for (std::size_t k = 0; k < model.dy; ++k) {
            out[k] += w * cond.mixture.centers[i][k];
        }
    }
    return out;
}

} // namespace condmode
