#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "condmode/density.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace condmode;
using testsupport::finite_diff_gradient;
using testsupport::random_mixture;
using testsupport::reference_mixture;
using testsupport::trapezoid;

namespace {
const double kInvSqrtTwoPi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
}

TEST_CASE("gaussian kernel peak equals the normalization constant") {
    CHECK(gaussian_kernel_eval(Point{{0.0}}, Bandwidth{{1.0}}) ==
          doctest::Approx(kInvSqrtTwoPi).epsilon(1e-14));
    CHECK(gaussian_kernel_eval(Point{{0.0, 0.0}}, Bandwidth{{0.5, 0.5}}) ==
          doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("gaussian kernel one sigma off peak") {
    CHECK(gaussian_kernel_eval(Point{{1.0}}, Bandwidth{{1.0}}) ==
          doctest::Approx(std::exp(-0.5) * kInvSqrtTwoPi).epsilon(1e-14));
}

TEST_CASE("gaussian kernel rejects dimension mismatch") {
    CHECK_THROWS_AS(gaussian_kernel_eval(Point{{0.0, 0.0}}, Bandwidth{{1.0}}),
                    std::invalid_argument);
}

TEST_CASE("gaussian kernel is bounded by its peak and positive") {
    Rng rng(Seed{11});
    for (int i = 0; i < 200; ++i) {
        Point off{{-6.0 + 12.0 * rng.uniform(), -6.0 + 12.0 * rng.uniform()}};
        Bandwidth s{{0.2 + rng.uniform(), 0.2 + rng.uniform()}};
        const double v = gaussian_kernel_eval(off, s);
        const double peak = 1.0 / (2.0 * std::numbers::pi * s[0] * s[1]);
        CHECK(v > 0.0);
        CHECK(v <= peak * (1.0 + 1e-12));
    }
}

TEST_CASE("gaussian kernel integrates to one (1-D trapezoid over +-8s)") {
    for (double s : {0.25, 1.0, 3.0}) {
        const double integral = trapezoid(
            [s](double x) { return gaussian_kernel_eval(Point{{x}}, Bandwidth{{s}}); },
            -8.0 * s, 8.0 * s, 20000);
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("joint density of a single unit kernel peaks at 1/(2 pi)") {
    JointKernelModel model{1, 1, {1.0}, {Point{{0.0}}}, {Point{{0.0}}},
                           {Bandwidth{{1.0}}}, {Bandwidth{{1.0}}}};
    CHECK(joint_density_eval(model, Point{{0.0}}, Point{{0.0}}) ==
          doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("joint density respects reflection symmetry of symmetric models") {
    JointKernelModel model{1, 1, {0.5, 0.5}, {Point{{0.0}}, Point{{0.0}}},
                           {Point{{1.0}}, Point{{-1.0}}},
                           {Bandwidth{{1.0}}, Bandwidth{{1.0}}},
                           {Bandwidth{{0.7}}, Bandwidth{{0.7}}}};
    for (double y : {0.3, 1.1, 2.5}) {
        CHECK(joint_density_eval(model, Point{{0.4}}, Point{{y}}) ==
              doctest::Approx(joint_density_eval(model, Point{{0.4}}, Point{{-y}}))
                  .epsilon(1e-14));
    }
}

TEST_CASE("joint density matches an independent term-by-term evaluation") {
    // Reference three-kernel mixture laid out as a joint model with a shared
    // dummy x axis, evaluated at the origin.
    JointKernelModel model;
    model.dx = 1;
    model.dy = 2;
    model.weights = {0.45, 0.45, 0.1};
    model.x_centers = {Point{{0.0}}, Point{{0.0}}, Point{{0.0}}};
    model.y_centers = {Point{{1.0, 1.0}}, Point{{-1.0, -1.0}}, Point{{-1.5, 1.5}}};
    model.x_bandwidths = {Bandwidth{{1.0}}, Bandwidth{{1.0}}, Bandwidth{{1.0}}};
    model.y_bandwidths = {Bandwidth{{1.0, 1.0}}, Bandwidth{{1.0, 1.0}}, Bandwidth{{0.5, 0.5}}};

    // Term-by-term oracle with scalar exponentials, no shared code path.
    auto g1 = [](double off, double s) {
        return std::exp(-off * off / (2.0 * s * s)) / (std::sqrt(2.0 * std::numbers::pi) * s);
    };
    double expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        double term = model.weights[i] * g1(0.0 - model.x_centers[i][0], 1.0);
        for (std::size_t k = 0; k < 2; ++k) {
            term *= g1(0.0 - model.y_centers[i][k], model.y_bandwidths[i][k]);
        }
        expected += term;
    }
    const double got = joint_density_eval(model, Point{{0.0}}, Point{{0.0, 0.0}});
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mixture density basics") {
    Mixture single{{1.0}, {Point{{2.0}}}, {Bandwidth{{1.0}}}};
    CHECK(mixture_density_eval(single, Point{{2.0}}) ==
          doctest::Approx(kInvSqrtTwoPi).epsilon(1e-14));

    Mixture two{{0.5, 0.5}, {Point{{-1.0}}, Point{{1.0}}}, {Bandwidth{{1.0}}, Bandwidth{{1.0}}}};
    CHECK(mixture_density_eval(two, Point{{0.0}}) ==
          doctest::Approx(std::exp(-0.5) * kInvSqrtTwoPi).epsilon(1e-13));
}

TEST_CASE("mixture density is nonnegative and below the largest kernel peak") {
    Rng rng(Seed{21});
    for (int i = 0; i < 50; ++i) {
        Mixture mix = random_mixture(rng, 2, 8);
        Point y{{-4.0 + 8.0 * rng.uniform(), -4.0 + 8.0 * rng.uniform()}};
        double peak = 0.0;
        for (std::size_t j = 0; j < mix.size(); ++j) {
            peak = std::max(peak, 1.0 / (2.0 * std::numbers::pi * mix.bandwidths[j][0] *
                                         mix.bandwidths[j][1]));
        }
        const double v = mixture_density_eval(mix, y);
        CHECK(v >= 0.0);
        CHECK(v <= peak * (1.0 + 1e-12));
    }
}

TEST_CASE("mixture density is linear in the weights") {
    Rng rng(Seed{31});
    for (int i = 0; i < 30; ++i) {
        Mixture mix = random_mixture(rng, 1, 6);
        Point y{{-3.0 + 6.0 * rng.uniform()}};
        double by_parts = 0.0;
        for (std::size_t j = 0; j < mix.size(); ++j) {
            Mixture one{{1.0}, {mix.centers[j]}, {mix.bandwidths[j]}};
            by_parts += mix.weights[j] * mixture_density_eval(one, y);
        }
        CHECK(mixture_density_eval(mix, y) == doctest::Approx(by_parts).epsilon(1e-12));
    }
}

TEST_CASE("gradient vanishes at a single kernel center") {
    Mixture single{{1.0}, {Point{{0.5, -0.25}}}, {Bandwidth{{1.0, 2.0}}}};
    const Point g = mixture_gradient(single, Point{{0.5, -0.25}});
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
}

TEST_CASE("gradient of a unit kernel one sigma out") {
    Mixture single{{1.0}, {Point{{0.0}}}, {Bandwidth{{1.0}}}};
    const Point g = mixture_gradient(single, Point{{1.0}});
    CHECK(g[0] == doctest::Approx(-std::exp(-0.5) * kInvSqrtTwoPi).epsilon(1e-13));
}

TEST_CASE("gradient matches central finite differences on random mixtures") {
    Rng rng(Seed{41});
    for (int i = 0; i < 100; ++i) {
        Mixture mix = random_mixture(rng, 2, 8);
        const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(mix.size()));
        Point y = mix.centers[j];
        for (std::size_t d = 0; d < 2; ++d) {
            y[d] += (0.5 + rng.uniform()) * mix.bandwidths[j][d] * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        }
        const Point ga = mixture_gradient(mix, y);
        const Point gf = finite_diff_gradient(mix, y);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t d = 0; d < 2; ++d) {
            num += (ga[d] - gf[d]) * (ga[d] - gf[d]);
            den += ga[d] * ga[d];
        }
        CHECK(std::sqrt(num) < 1e-6 * std::sqrt(den));
    }
}

TEST_CASE("log path agrees with direct evaluation where the latter is representable") {
    Rng rng(Seed{51});
    for (int i = 0; i < 100; ++i) {
        Mixture mix = random_mixture(rng, 1, 6);
        // Far queries drive the direct path toward (but not into) underflow.
        Point y{{-40.0 + 80.0 * rng.uniform()}};
        const double direct = mixture_density_eval(mix, y);
        const double via_log = std::exp(mixture_log_density_eval(mix, y));
        if (direct >= 1e-300) {
            CHECK(via_log == doctest::Approx(direct).epsilon(1e-10));
        }
    }
}

TEST_CASE("validation rejects broken invariants") {
    Mixture bad_weights{{0.5, 0.6}, {Point{{0.0}}, Point{{1.0}}},
                        {Bandwidth{{1.0}}, Bandwidth{{1.0}}}};
    CHECK_THROWS_AS(bad_weights.validate(), std::invalid_argument);

    Mixture bad_bandwidth{{1.0}, {Point{{0.0}}}, {Bandwidth{{0.0}}}};
    CHECK_THROWS_AS(bad_bandwidth.validate(), std::invalid_argument);

    JointKernelModel short_vectors{1, 1, {0.5, 0.5}, {Point{{0.0}}}, {Point{{0.0}}, Point{{1.0}}},
                                   {Bandwidth{{1.0}}, Bandwidth{{1.0}}},
                                   {Bandwidth{{1.0}}, Bandwidth{{1.0}}}};
    CHECK_THROWS_AS(short_vectors.validate(), std::invalid_argument);

    CHECK_NOTHROW(reference_mixture().validate());
}
