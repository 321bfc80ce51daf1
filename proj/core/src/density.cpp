#include "condmode/density.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace condmode {

namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178; // log(2 pi) / 2

bool all_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_weights(const std::vector<double>& w, const char* who) {
    require(!w.empty(), std::string(who) + ": at least one kernel required");
    double sum = 0.0;
    for (double wi : w) {
        require(std::isfinite(wi) && wi >= 0.0,
                std::string(who) + ": weights must be finite and nonnegative");
        sum += wi;
    }
    require(std::abs(sum - 1.0) <= kWeightSumTol,
            std::string(who) + ": weights must sum to 1, got " + std::to_string(sum));
}

} // namespace

void Bandwidth::validate() const {
    require(!scales.empty(), "Bandwidth: empty");
    for (double s : scales) {
        require(std::isfinite(s) && s > 0.0,
                "Bandwidth: components must be positive and finite");
    }
}

void JointKernelModel::validate() const {
    require(dx >= 1 && dy >= 1, "JointKernelModel: dx and dy must be >= 1");
    check_weights(weights, "JointKernelModel");
    const std::size_t m = weights.size();
    require(x_centers.size() == m && y_centers.size() == m &&
            x_bandwidths.size() == m && y_bandwidths.size() == m,
            "JointKernelModel: parallel vectors must all have length m");
    for (std::size_t i = 0; i < m; ++i) {
        require(x_centers[i].dim() == dx && y_centers[i].dim() == dy,
                "JointKernelModel: center dimension mismatch");
        require(x_bandwidths[i].dim() == dx && y_bandwidths[i].dim() == dy,
                "JointKernelModel: bandwidth dimension mismatch");
        require(all_finite(x_centers[i].coords) && all_finite(y_centers[i].coords),
                "JointKernelModel: centers must be finite");
        x_bandwidths[i].validate();
        y_bandwidths[i].validate();
    }
}

void Mixture::validate() const {
    check_weights(weights, "Mixture");
    const std::size_t k = weights.size();
    require(centers.size() == k && bandwidths.size() == k,
            "Mixture: parallel vectors must all have length k");
    const std::size_t d = centers.front().dim();
    require(d >= 1, "Mixture: dimension must be >= 1");
    for (std::size_t i = 0; i < k; ++i) {
        require(centers[i].dim() == d && bandwidths[i].dim() == d,
                "Mixture: kernel dimension mismatch");
        require(all_finite(centers[i].coords), "Mixture: centers must be finite");
        bandwidths[i].validate();
    }
}

double gaussian_kernel_eval(const Point& offset, const Bandwidth& s) {
    return std::exp(log_gaussian_kernel_eval(offset, s));
}

double log_gaussian_kernel_eval(const Point& offset, const Bandwidth& s) {
    const std::size_t d = offset.dim();
    require(d == s.dim() && d >= 1, "gaussian_kernel_eval: dimension mismatch");
    double log_v = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double z = offset[k] / s[k];
        log_v -= kHalfLogTwoPi + std::log(s[k]) + 0.5 * z * z;
    }
    return log_v;
}

double joint_density_eval(const JointKernelModel& model, const Point& x, const Point& y) {
    require(x.dim() == model.dx && y.dim() == model.dy,
            "joint_density_eval: query dimension mismatch");
    double total = 0.0;
    Point off_x{std::vector<double>(model.dx)};
    Point off_y{std::vector<double>(model.dy)};
    for (std::size_t i = 0; i < model.size(); ++i) {
        for (std::size_t k = 0; k < model.dx; ++k) off_x[k] = x[k] - model.x_centers[i][k];
        for (std::size_t k = 0; k < model.dy; ++k) off_y[k] = y[k] - model.y_centers[i][k];
        total += model.weights[i] * gaussian_kernel_eval(off_x, model.x_bandwidths[i]) *
                 gaussian_kernel_eval(off_y, model.y_bandwidths[i]);
    }
    return total;
}

namespace {

// log of one weighted kernel term, -inf for zero weight.
double log_term(const Mixture& mix, std::size_t i, const Point& y, Point& scratch) {
    if (mix.weights[i] <= 0.0) return -std::numeric_limits<double>::infinity();
    const std::size_t d = y.dim();
    for (std::size_t k = 0; k < d; ++k) scratch[k] = y[k] - mix.centers[i][k];
    return std::log(mix.weights[i]) + log_gaussian_kernel_eval(scratch, mix.bandwidths[i]);
}

} // namespace

double mixture_density_eval(const Mixture& mix, const Point& y) {
    require(y.dim() == mix.dim(), "mixture_density_eval: dimension mismatch");
    double total = 0.0;
    Point off{std::vector<double>(y.dim())};
    for (std::size_t i = 0; i < mix.size(); ++i) {
        for (std::size_t k = 0; k < y.dim(); ++k) off[k] = y[k] - mix.centers[i][k];
        total += mix.weights[i] * gaussian_kernel_eval(off, mix.bandwidths[i]);
    }
    return total;
}

double mixture_log_density_eval(const Mixture& mix, const Point& y) {
    require(y.dim() == mix.dim(), "mixture_log_density_eval: dimension mismatch");
    const std::size_t k = mix.size();
    std::vector<double> logs(k);
    Point scratch{std::vector<double>(y.dim())};
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        logs[i] = log_term(mix, i, y, scratch);
        if (logs[i] > max_log) max_log = logs[i];
    }
    if (!(max_log > -std::numeric_limits<double>::infinity())) {
        return -std::numeric_limits<double>::infinity();
    }
    double sum = 0.0;
    for (double l : logs) sum += std::exp(l - max_log);
    return max_log + std::log(sum);
}

Point mixture_gradient(const Mixture& mix, const Point& y) {
    require(y.dim() == mix.dim(), "mixture_gradient: dimension mismatch");
    const std::size_t d = y.dim();
    Point grad{std::vector<double>(d, 0.0)};
    Point off{std::vector<double>(d)};
    for (std::size_t i = 0; i < mix.size(); ++i) {
        for (std::size_t k = 0; k < d; ++k) off[k] = y[k] - mix.centers[i][k];
        const double term = mix.weights[i] * gaussian_kernel_eval(off, mix.bandwidths[i]);
        for (std::size_t k = 0; k < d; ++k) {
            const double s = mix.bandwidths[i][k];
            grad[k] -= term * off[k] / (s * s);
        }
    }
    return grad;
}

} // namespace condmode
