// Acceptance suite: runs every gate criterion at full scale and prints one
// pass/fail line each. Exits nonzero when any criterion fails.
//
// Usage: acceptance <path-to-condmode-cli>

#include "condmode/conditioning.hpp"
#include "condmode/experiments.hpp"
#include "condmode/io.hpp"
#include "condmode/mode_search.hpp"
#include "condmode/regression.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

using namespace condmode;
using namespace condmode::experiments;
using namespace testsupport;

namespace {

namespace fs = std::filesystem;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), format, args...);
    return buf;
}

// --- criterion 1: golden reproduction of the two-maxima reference search ----

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const Mixture mix = reference_mixture();

    // Dense-grid oracle optima (spacing 2.5e-4) near each maximum.
    const Point opt_pos =
        brute_force_mode(mix, GridSpec{{{0.7, 1.2, 2001}, {0.7, 1.2, 2001}}});
    const Point opt_neg =
        brute_force_mode(mix, GridSpec{{{-1.2, -0.7, 2001}, {-1.2, -0.7, 2001}}});

    bool pass = true;
    int hit_pos = 0;
    int hit_neg = 0;
    double worst_unrefined = 0.0;
    double worst_refined = 0.0;
    SearchConfig unrefined;
    unrefined.q = 1000;
    unrefined.refine = false;
    SearchConfig refined;
    refined.q = 1000;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const ModeResult raw = find_mode(mix, unrefined, Seed{seed});
        const double d_raw = std::min(euclidean(raw.argmax, Point{{1.0, 1.0}}),
                                      euclidean(raw.argmax, Point{{-1.0, -1.0}}));
        worst_unrefined = std::max(worst_unrefined, d_raw);
        if (d_raw >= 0.3) pass = false;

        const ModeResult ref = find_mode(mix, refined, Seed{seed});
        const bool near_pos = euclidean(ref.argmax, Point{{1.0, 1.0}}) <
                              euclidean(ref.argmax, Point{{-1.0, -1.0}});
        (near_pos ? hit_pos : hit_neg)++;
        const double d_ref = euclidean(ref.argmax, near_pos ? opt_pos : opt_neg);
        worst_refined = std::max(worst_refined, d_ref);
        if (d_ref >= 1e-3) pass = false;
    }
    if (hit_pos == 0 || hit_neg == 0) pass = false;
    const double elapsed = seconds_since(t0);
    if (elapsed >= 5.0) pass = false;
    report(1, pass, "golden two-maxima search, 100 seeds, q=1000",
           fmt("worst unrefined %.3f (<0.3), worst refined %.2e (<1e-3), maxima hit %d/%d, "
               "%.2f s (<5)",
               worst_unrefined, worst_refined, hit_pos, hit_neg, elapsed));
}

// --- criterion 2: oracle equivalence on random mixtures ---------------------

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(Seed{20260810});
    bool pass = true;
    double worst_ratio = 1.0;
    for (int c = 0; c < 50; ++c) {
        const std::size_t dim = (c % 2) + 1;
        const Mixture mix = random_mixture(rng, dim);
        GridSpec grid;
        for (std::size_t a = 0; a < dim; ++a) {
            auto [lo, hi] = mixture_axis_range(mix, a);
            grid.axes.push_back({lo, hi, 1000});
        }
        const Point g = brute_force_mode(mix, grid);
        const double grid_density = mixture_density_eval(mix, g);
        const ModeResult r = find_mode(mix, SearchConfig{}, Seed{static_cast<std::uint64_t>(c + 1)});
        worst_ratio = std::min(worst_ratio, r.density / grid_density);
        if (r.density < 0.999 * grid_density) pass = false;
    }
    const double elapsed = seconds_since(t0);
    if (elapsed >= 60.0) pass = false;
    report(2, pass, "refined search vs 10^3-per-axis grid oracle, 50 random mixtures",
           fmt("worst density ratio %.6f (>=0.999), %.1f s (<60)", worst_ratio, elapsed));
}

// --- criterion 3: quantile coverage of the sampled candidates ---------------

void criterion_3() {
    const Mixture mix = reference_mixture();
    std::vector<double> densities;
    densities.reserve(100000);
    for (const Point& p : sample_mixture(mix, 100000, Seed{424242})) {
        densities.push_back(mixture_density_eval(mix, p));
    }
    std::nth_element(densities.begin(), densities.begin() + 99000, densities.end());
    const double q99 = densities[99000];

    SearchConfig cfg;
    cfg.q = 1000;
    cfg.refine = false;
    int below = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const double best = find_mode(mix, cfg, Seed{seed}).best_sample_density;
        worst = std::min(worst, best);
        if (best < q99) ++below;
    }
    report(3, below == 0, "best sample exceeds the 0.99 density quantile, 200 seeds",
           fmt("0.99 quantile %.6f, worst best-sample %.6f, runs below: %d (=0)", q99, worst,
               below));
}

// --- criteria 4 and 5: the regression experiments ----------------------------

void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg; // defaults: n=1000, sigma=0.2, s=(0.1,0.1), q=1000, 200 queries
    const ExperimentReport rep = run_sine_experiment(cfg);
    const double elapsed = seconds_since(t0);
    const bool pass = rep.summary.nw_rmse <= rep.summary.mode_rmse &&
                      rep.summary.mode_rmse <= 0.15 && rep.summary.nw_rmse <= 0.15 &&
                      elapsed < 120.0;
    report(4, pass, "sine experiment: expectation beats mode, both track the curve",
           fmt("mode_rmse %.4f, nw_rmse %.4f (nw<=mode, both<=0.15), missing %zu, %.1f s (<120)",
               rep.summary.mode_rmse, rep.summary.nw_rmse, rep.summary.missing, elapsed));
}

void criterion_5() {
    ExperimentConfig cfg;
    cfg.noise_sigma = kAmbiguousNoiseSigma;
    const ExperimentReport rep = run_ambiguous_experiment(cfg);
    const std::size_t ok = rep.summary.query_count - rep.summary.missing;
    const double mode_rate =
        ok == 0 ? 1.0 : static_cast<double>(rep.summary.mode_dead_zone) / static_cast<double>(ok);
    const double nw_rate =
        ok == 0 ? 0.0 : static_cast<double>(rep.summary.nw_dead_zone) / static_cast<double>(ok);
    const bool pass = mode_rate < 0.05 && nw_rate > 0.50;
    report(5, pass, "ambiguous experiment: mode avoids the dead zone, expectation lands in it",
           fmt("mode dead-zone rate %.3f (<0.05), nw dead-zone rate %.3f (>0.50), queries %zu",
               mode_rate, nw_rate, ok));
}

// --- criterion 6: numerical property suites ----------------------------------

void criterion_6() {
    bool pass = true;
    std::string detail;

    // Conditional weights sum to one, 1000 random (model, query) pairs.
    {
        Rng rng(Seed{777});
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const JointKernelModel model = random_joint_model(rng, 1 + (i % 2), 1 + ((i / 2) % 2));
            Point x{std::vector<double>(model.dx)};
            for (double& v : x.coords) v = -3.0 + 6.0 * rng.uniform();
            double sum = 0.0;
            for (double w : condition(model, x).mixture.weights) sum += w;
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        if (worst > 1e-12) pass = false;
        detail += fmt("weight-sum err %.1e (<=1e-12)", worst);
    }

    // 1-D conditional densities integrate to one.
    {
        Rng rng(Seed{555});
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const JointKernelModel model = random_joint_model(rng, 1, 1);
            const Point x{{-2.0 + 4.0 * rng.uniform()}};
            const ConditionalMixture cond = condition(model, x);
            auto [lo, hi] = mixture_axis_range(cond.mixture, 0, 8.5);
            const double integral = trapezoid(
                [&](double y) { return mixture_density_eval(cond.mixture, Point{{y}}); }, lo, hi,
                60000);
            worst = std::max(worst, std::abs(integral - 1.0));
        }
        if (worst > 1e-6) pass = false;
        detail += fmt(", quadrature err %.1e (<=1e-6)", worst);
    }

    // Analytic gradients against central finite differences.
    {
        Rng rng(Seed{888});
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Mixture mix = random_mixture(rng, 1 + (i % 2), 8);
            const std::size_t j =
                static_cast<std::size_t>(rng.uniform() * static_cast<double>(mix.size()));
            Point y = mix.centers[j];
            for (std::size_t d = 0; d < y.dim(); ++d) {
                y[d] += (0.5 + rng.uniform()) * mix.bandwidths[j][d] *
                        (rng.uniform() < 0.5 ? -1.0 : 1.0);
            }
            const Point ga = mixture_gradient(mix, y);
            const Point gf = finite_diff_gradient(mix, y);
            double num = 0.0;
            double den = 0.0;
            for (std::size_t d = 0; d < y.dim(); ++d) {
                num += (ga[d] - gf[d]) * (ga[d] - gf[d]);
                den += ga[d] * ga[d];
            }
            worst = std::max(worst, std::sqrt(num) / std::sqrt(den));
        }
        if (worst > 1e-6) pass = false;
        detail += fmt(", gradient rel err %.1e (<1e-6)", worst);
    }

    // Sampler distribution: KS statistic under the 1% critical value.
    {
        Rng rng(Seed{999});
        const double critical = 1.63 / std::sqrt(10000.0);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const Mixture mix = random_mixture(rng, 1, 10);
            std::vector<double> xs;
            xs.reserve(10000);
            for (const Point& p : sample_mixture(mix, 10000, Seed{static_cast<std::uint64_t>(1000 + i)})) {
                xs.push_back(p[0]);
            }
            worst = std::max(worst, ks_statistic(xs, [&](double y) {
                return mixture_cdf_1d(mix, y);
            }));
        }
        if (worst >= critical) pass = false;
        detail += fmt(", KS %.4f (<%.4f)", worst, critical);
    }

    report(6, pass, "numerical property suites", detail);
}

// --- criterion 7: byte-deterministic CLI -------------------------------------

struct CliRunner {
    std::string binary;
    fs::path dir;
    int counter = 0;

    // Returns (exit code, combined output file bytes).
    std::pair<int, std::string> run(const std::string& args) {
        const fs::path out = dir / ("out_" + std::to_string(counter++) + ".txt");
        const std::string cmd =
            "\"" + binary + "\" " + args + " > \"" + out.string() + "\" 2> /dev/null";
        const int raw = std::system(cmd.c_str());
        std::ifstream in(out, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, text};
    }
};

std::string slurp_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void criterion_7(const std::string& cli) {
    CliRunner runner;
    runner.binary = cli;
    runner.dir = fs::temp_directory_path() / ("condmode_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(runner.dir);

    bool pass = true;
    std::string first_failure;
    auto expect_identical = [&](const std::string& name, const std::string& args_template,
                                const std::vector<std::string>& outputs) {
        // Run the same seeded command twice into _1/_2 slots and compare all
        // produced files byte for byte.
        std::vector<std::string> bytes[2];
        for (int round = 0; round < 2; ++round) {
            std::string args = args_template;
            const std::string slot = runner.dir.string() + "/" + name + "_" + std::to_string(round);
            std::size_t at;
            while ((at = args.find("{}")) != std::string::npos) args.replace(at, 2, slot);
            const auto [code, stdout_text] = runner.run(args);
            if (code != 0) {
                pass = false;
                if (first_failure.empty()) first_failure = name + " exited " + std::to_string(code);
                return;
            }
            bytes[round].push_back(stdout_text);
            for (const std::string& suffix : outputs) {
                bytes[round].push_back(slurp_file(slot + suffix));
            }
        }
        if (bytes[0] != bytes[1]) {
            pass = false;
            if (first_failure.empty()) first_failure = name + " differed between runs";
        }
    };

    expect_identical("gen_sine", "gen sine --n 50 --sigma 0.2 --seed 7 --out {}.csv", {".csv"});
    expect_identical("gen_ambiguous", "gen ambiguous --n 50 --seed 7 --out {}.csv", {".csv"});

    // A dataset both fit variants can share.
    const fs::path data = runner.dir / "fit_input.csv";
    runner.run("gen sine --n 60 --seed 3 --out \"" + data.string() + "\"");
    expect_identical("fit_fixed", "fit --data \"" + data.string() + "\" --bandwidth 0.1 --out {}.json",
                     {".json"});
    expect_identical("fit_loo",
                     "fit --data \"" + data.string() + "\" --loo-grid 0.05,0.1,0.2 --out {}.json",
                     {".json"});

    const fs::path model = runner.dir / "model.json";
    runner.run("fit --data \"" + data.string() + "\" --bandwidth 0.1,0.1 --out \"" +
               model.string() + "\"");
    expect_identical("predict_mode", "predict --model \"" + model.string() +
                                         "\" --method mode --x 1 --x 2 --x 3 --q 500 --seed 11 "
                                         "--out {}.csv",
                     {".csv"});
    expect_identical("predict_nw", "predict --model \"" + model.string() +
                                       "\" --method nw --x 1 --x 2 --x 3 --out {}.csv",
                     {".csv"});
    expect_identical("mode_verb",
                     "mode --model \"" + model.string() + "\" --x 2 --q 500 --seed 13 --out {}.json",
                     {".json"});
    expect_identical("benchmark_sine",
                     "benchmark sine --n 150 --q 150 --queries 20 --dataset-seed 1 "
                     "--predict-seed 2 --out {}",
                     {"_records.csv", "_summary.json", "_plot.csv"});
    expect_identical("benchmark_ambiguous",
                     "benchmark ambiguous --n 150 --q 150 --queries 20 --dataset-seed 1 "
                     "--predict-seed 2 --out {}",
                     {"_records.csv", "_summary.json", "_plot.csv"});

    std::error_code ec;
    fs::remove_all(runner.dir, ec);
    report(7, pass, "seeded CLI invocations reproduce byte-identical outputs",
           pass ? "9 command forms, 2 runs each" : first_failure);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-condmode-cli>\n");
        return 64;
    }
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7(argv[1]);

    if (g_failures == 0) {
        std::printf("acceptance: all 7 criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
