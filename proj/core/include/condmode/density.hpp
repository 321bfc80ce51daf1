#pragma once

#include <cstddef>
#include <vector>

namespace condmode {

// Tolerance used by all weight-normalization invariants.
inline constexpr double kWeightSumTol = 1e-12;

/// A point in d-dimensional space.
struct Point {
    std::vector<double> coords;

    std::size_t dim() const { return coords.size(); }
    double& operator[](std::size_t k) { return coords[k]; }
    double operator[](std::size_t k) const { return coords[k]; }

    friend bool operator==(const Point&, const Point&) = default;
};

/// Per-dimension kernel scale (a standard deviation for each coordinate).
struct Bandwidth {
    std::vector<double> scales;

    std::size_t dim() const { return scales.size(); }
    double& operator[](std::size_t k) { return scales[k]; }
    double operator[](std::size_t k) const { return scales[k]; }

    friend bool operator==(const Bandwidth&, const Bandwidth&) = default;

    // Throws std::invalid_argument unless every component is positive and finite.
    void validate() const;
};

/// Weighted sum of axis-aligned Gaussian product kernels over (x, y) pairs:
///
///     p(x, y) = sum_i w_i * phi_i(x - xc_i) * psi_i(y - yc_i)
///
/// with phi_i and psi_i Gaussian product kernels with per-kernel diagonal
/// bandwidths. Weights are nonnegative and sum to one.
struct JointKernelModel {
    std::size_t dx = 0;
    std::size_t dy = 0;
    std::vector<double> weights;
    std::vector<Point> x_centers;
    std::vector<Point> y_centers;
    std::vector<Bandwidth> x_bandwidths;
    std::vector<Bandwidth> y_bandwidths;

    std::size_t size() const { return weights.size(); }

    // Throws std::invalid_argument on any broken invariant (empty model,
    // inconsistent dimensions, negative weights, weight sum off by more
    // than kWeightSumTol, non-positive bandwidths, non-finite values).
    void validate() const;
};

/// A plain mixture density over one space:
///
///     h(y) = sum_i w_i * psi_i(y - c_i)
struct Mixture {
    std::vector<double> weights;
    std::vector<Point> centers;
    std::vector<Bandwidth> bandwidths;

    std::size_t size() const { return weights.size(); }
    std::size_t dim() const { return centers.empty() ? 0 : centers.front().dim(); }

    void validate() const; // throws std::invalid_argument, same policy as above
};

/// Normalized Gaussian product kernel evaluated at `offset`:
/// prod_k 1/(sqrt(2 pi) s_k) * exp(-offset_k^2 / (2 s_k^2)).
double gaussian_kernel_eval(const Point& offset, const Bandwidth& s);

/// Log of gaussian_kernel_eval; never underflows for finite inputs.
double log_gaussian_kernel_eval(const Point& offset, const Bandwidth& s);

/// Joint density of `model` at (x, y).
double joint_density_eval(const JointKernelModel& model, const Point& x, const Point& y);

/// Mixture density h(y).
double mixture_density_eval(const Mixture& mix, const Point& y);

/// log h(y) via log-sum-exp; backs conditioning and far-field queries.
double mixture_log_density_eval(const Mixture& mix, const Point& y);

/// Analytic gradient of the mixture density at y:
/// grad_k = sum_i w_i psi_i(y - c_i) * (-(y_k - c_ik) / s_ik^2).
Point mixture_gradient(const Mixture& mix, const Point& y);

} // namespace condmode
