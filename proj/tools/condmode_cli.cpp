// condmode: fit kernel density models to paired data and predict by either
// the conditional mode (sampling-based global maximization plus gradient
// ascent) or the Nadaraya-Watson conditional expectation.

#include <CLI11.hpp>

#include "condmode/errors.hpp"
#include "condmode/experiments.hpp"
#include "condmode/io.hpp"
#include "condmode/mode_search.hpp"
#include "condmode/parallel.hpp"
#include "condmode/regression.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace condmode;

std::vector<double> parse_reals(const std::string& text, const char* what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string cell =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const char* begin = cell.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || end != begin + cell.size() || !std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": '" + cell +
                                        "' is not a finite real");
        }
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

Bandwidth bandwidth_from_flag(const std::string& flag, std::size_t dims, const char* what) {
    std::vector<double> values = parse_reals(flag, what);
    if (values.size() == 1) values.assign(dims, values[0]);
    if (values.size() != dims) {
        throw std::invalid_argument(std::string(what) + ": expected 1 or " +
                                    std::to_string(dims) + " components, got " +
                                    std::to_string(values.size()));
    }
    Bandwidth b{std::move(values)};
    b.validate();
    return b;
}

// Writes to the path, or to stdout for "-".
void emit(const std::string& out_path, const std::string& text) {
    if (out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + out_path);
}

struct GenOptions {
    std::string kind;
    std::size_t n = 0;
    std::optional<double> sigma;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen(const GenOptions& opt) {
    const double sigma = opt.sigma.value_or(
        opt.kind == "sine" ? experiments::kSineNoiseSigma : experiments::kAmbiguousNoiseSigma);
    const Dataset data = opt.kind == "sine"
                             ? experiments::gen_sine_dataset(opt.n, sigma, Seed{opt.seed})
                             : experiments::gen_ambiguous_dataset(opt.n, Seed{opt.seed}, sigma);
    io::write_dataset_file(opt.out, data);
    std::cerr << "wrote " << data.size() << " rows to " << opt.out << "\n";
    return 0;
}

struct FitOptions {
    std::string data_path;
    std::string bandwidth;
    std::string loo_grid;
    std::string out;
};

int run_fit(const FitOptions& opt) {
    if (opt.loo_grid.empty() && opt.bandwidth.empty()) {
        throw std::invalid_argument("fit: either --bandwidth or --loo-grid is required");
    }
    const Dataset data = io::read_dataset_file(opt.data_path);
    const std::size_t dims = data.dx + data.dy;

    Bandwidth bandwidth;
    io::ModelMetadata metadata;
    if (!opt.loo_grid.empty()) {
        std::vector<Bandwidth> grid;
        for (double s : parse_reals(opt.loo_grid, "--loo-grid")) {
            Bandwidth cand{std::vector<double>(dims, s)};
            cand.validate();
            grid.push_back(std::move(cand));
        }
        bandwidth = select_bandwidth_loo(data, grid);
        const double score = loo_log_likelihood(data, bandwidth);
        if (score == -std::numeric_limits<double>::infinity()) {
            std::cerr << "warning: leave-one-out likelihood is degenerate for every "
                         "candidate; smallest grid bandwidth selected\n";
        }
        metadata["loo_bandwidth"] = bandwidth.scales;
        metadata["loo_log_likelihood"] = {score};
    } else if (!opt.bandwidth.empty()) {
        bandwidth = bandwidth_from_flag(opt.bandwidth, dims, "--bandwidth");
    }

    const JointKernelModel model = fit_kde(data, bandwidth);
    io::write_model_file(opt.out, model, metadata);
    std::cerr << "fitted " << model.size() << " kernels (dx=" << model.dx
              << ", dy=" << model.dy << ") -> " << opt.out << "\n";
    return 0;
}

struct PredictOptions {
    std::string model_path;
    std::string method;
    std::vector<std::string> x_flags;
    std::string query_path;
    std::size_t q = 1000;
    std::uint64_t seed = 0;
    double prune = 1e-12;
    bool no_refine = false;
    std::string out = "-";
};

int run_predict(const PredictOptions& opt) {
    const JointKernelModel model = io::read_model_file(opt.model_path);

    std::vector<Point> queries;
    for (const std::string& flag : opt.x_flags) {
        queries.push_back(Point{parse_reals(flag, "--x")});
    }
    if (!opt.query_path.empty()) {
        auto from_file = io::read_query_file(opt.query_path);
        queries.insert(queries.end(), from_file.begin(), from_file.end());
    }
    if (queries.empty()) {
        throw std::invalid_argument("predict: provide --x or --queries");
    }
    for (const Point& x : queries) {
        if (x.dim() != model.dx) {
            throw std::invalid_argument("predict: query dimension " + std::to_string(x.dim()) +
                                        " does not match model dx=" + std::to_string(model.dx));
        }
    }

    RegressorConfig cfg;
    cfg.search.q = opt.q;
    cfg.search.refine = !opt.no_refine;
    cfg.prune = PruneConfig{opt.prune};
    cfg.prune.validate();

    std::string text;
    for (std::size_t k = 1; k <= model.dx; ++k) text += "x" + std::to_string(k) + ",";
    for (std::size_t k = 1; k <= model.dy; ++k) text += "y" + std::to_string(k) + ",";
    text += "density,status\n";

    std::size_t warnings = 0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const Point& x = queries[i];
        for (std::size_t k = 0; k < model.dx; ++k) text += io::format_real(x[k]) + ",";
        try {
            Point y;
            if (opt.method == "mode") {
                y = predict_mode(model, x, cfg, derive_seed(Seed{opt.seed}, i));
            } else {
                y = predict_nw(model, x, cfg.prune);
            }
            const double density = conditional_density_eval(model, x, y);
            for (std::size_t k = 0; k < model.dy; ++k) text += io::format_real(y[k]) + ",";
            text += io::format_real(density) + ",ok\n";
        } catch (const OutsideSupportError&) {
            ++warnings;
            for (std::size_t k = 0; k < model.dy; ++k) text += ",";
            text += ",outside_support\n";
        }
    }
    emit(opt.out, text);
    if (warnings > 0) {
        std::cerr << "warning: " << warnings << " of " << queries.size()
                  << " queries outside model support\n";
    }
    return 0;
}

struct ModeOptions {
    std::string model_path;
    std::string x_flag;
    std::size_t q = 1000;
    std::uint64_t seed = 0;
    double prune = 1e-12;
    bool no_refine = false;
    std::string out = "-";
};

int run_mode(const ModeOptions& opt) {
    const JointKernelModel model = io::read_model_file(opt.model_path);
    const Point x{parse_reals(opt.x_flag, "--x")};
    if (x.dim() != model.dx) {
        throw std::invalid_argument("mode: query dimension does not match model dx=" +
                                    std::to_string(model.dx));
    }
    PruneConfig prune{opt.prune};
    prune.validate();
    SearchConfig search;
    search.q = opt.q;
    search.refine = !opt.no_refine;

    const ConditionalMixture cond = condition(model, x, prune);
    const ModeResult result = find_mode(cond.mixture, search, Seed{opt.seed});

    auto array = [](const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += io::format_real(v[i]);
        }
        return s + "]";
    };
    std::string text = "{\n";
    text += "  \"argmax\": " + array(result.argmax.coords) + ",\n";
    text += "  \"density\": " + io::format_real(result.density) + ",\n";
    text += "  \"best_sample\": " + array(result.best_sample.coords) + ",\n";
    text += "  \"best_sample_density\": " + io::format_real(result.best_sample_density) + ",\n";
    text += "  \"ascent_iterations\": " + std::to_string(result.ascent_iterations) + ",\n";
    text += "  \"candidates_evaluated\": " + std::to_string(result.candidates_evaluated) + ",\n";
    text += "  \"kernels_retained\": " + std::to_string(cond.mixture.size()) + "\n";
    text += "}\n";
    emit(opt.out, text);
    return 0;
}

struct BenchmarkOptions {
    std::string experiment;
    std::size_t n = 1000;
    std::string s = "0.1,0.1";
    std::optional<double> sigma;
    std::size_t q = 1000;
    std::size_t queries = 200;
    std::uint64_t dataset_seed = 1;
    std::uint64_t predict_seed = 2;
    double prune = 1e-12;
    bool no_refine = false;
    std::string out;
};

int run_benchmark(const BenchmarkOptions& opt) {
    experiments::ExperimentConfig cfg;
    cfg.n = opt.n;
    cfg.noise_sigma = opt.sigma.value_or(opt.experiment == "sine"
                                             ? experiments::kSineNoiseSigma
                                             : experiments::kAmbiguousNoiseSigma);
    cfg.bandwidth = bandwidth_from_flag(opt.s, 2, "--s");
    cfg.q = opt.q;
    cfg.query_count = opt.queries;
    cfg.dataset_seed = Seed{opt.dataset_seed};
    cfg.predict_seed = Seed{opt.predict_seed};
    cfg.prune = PruneConfig{opt.prune};
    cfg.prune.validate();
    cfg.refine = !opt.no_refine;

    const experiments::ExperimentReport report =
        opt.experiment == "sine" ? experiments::run_sine_experiment(cfg)
                                 : experiments::run_ambiguous_experiment(cfg);
    const io::ReportPaths paths = io::write_experiment_report(opt.out, report);

    std::cout << report.experiment << ": mode_rmse=" << io::format_real(report.summary.mode_rmse)
              << " nw_rmse=" << io::format_real(report.summary.nw_rmse)
              << " missing=" << report.summary.missing;
    if (report.experiment == "ambiguous") {
        std::cout << " mode_dead_zone=" << report.summary.mode_dead_zone
                  << " nw_dead_zone=" << report.summary.nw_dead_zone;
    }
    std::cout << "\n";
    std::cerr << "wrote " << paths.records.string() << ", " << paths.summary.string() << ", "
              << paths.plot.string() << "\n";
    return 0;
}

void apply_thread_cap_from_env() {
    const char* env = std::getenv("CONDMODE_THREADS");
    if (!env || !*env) return;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0') set_max_threads(static_cast<unsigned>(v));
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_cap_from_env();

    CLI::App app{"kernel regression by the mode of the conditional density"};
    app.require_subcommand(1);

    GenOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic dataset CSV");
    gen_cmd->add_option("kind", gen.kind, "dataset kind")
        ->required()
        ->check(CLI::IsMember({"sine", "ambiguous"}));
    gen_cmd->add_option("--n", gen.n, "number of rows")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--sigma", gen.sigma, "noise standard deviation")
        ->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--seed", gen.seed, "RNG seed");
    gen_cmd->add_option("--out", gen.out, "output CSV path")->required();

    FitOptions fit;
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a kernel density model to a dataset");
    fit_cmd->add_option("--data", fit.data_path, "dataset CSV")->required();
    CLI::Option* bw_opt =
        fit_cmd->add_option("--bandwidth", fit.bandwidth,
                            "joint bandwidth, comma separated (single value broadcasts)");
    fit_cmd->add_option("--loo-grid", fit.loo_grid,
                        "comma separated isotropic candidates for leave-one-out selection")
        ->excludes(bw_opt);
    fit_cmd->add_option("--out", fit.out, "output model JSON path")->required();

    PredictOptions predict;
    CLI::App* predict_cmd = app.add_subcommand("predict", "predict y for query points");
    predict_cmd->add_option("--model", predict.model_path, "model JSON")->required();
    predict_cmd->add_option("--method", predict.method, "predictor")
        ->required()
        ->check(CLI::IsMember({"mode", "nw"}));
    predict_cmd->add_option("--x", predict.x_flags, "query point, comma separated (repeatable)");
    predict_cmd->add_option("--queries", predict.query_path, "CSV of query points (header x1,..)");
    predict_cmd->add_option("--q", predict.q, "mode-search sample count")
        ->check(CLI::PositiveNumber);
    predict_cmd->add_option("--seed", predict.seed, "RNG seed (per query: derived sub-seeds)");
    predict_cmd->add_option("--prune", predict.prune, "relative prune threshold");
    predict_cmd->add_flag("--no-refine", predict.no_refine, "skip gradient-ascent refinement");
    predict_cmd->add_option("--out", predict.out, "output CSV path, or - for stdout");

    ModeOptions mode;
    CLI::App* mode_cmd =
        app.add_subcommand("mode", "full mode-search diagnostics for one query");
    mode_cmd->add_option("--model", mode.model_path, "model JSON")->required();
    mode_cmd->add_option("--x", mode.x_flag, "query point, comma separated")->required();
    mode_cmd->add_option("--q", mode.q, "sample count")->check(CLI::PositiveNumber);
    mode_cmd->add_option("--seed", mode.seed, "RNG seed");
    mode_cmd->add_option("--prune", mode.prune, "relative prune threshold");
    mode_cmd->add_flag("--no-refine", mode.no_refine, "skip gradient-ascent refinement");
    mode_cmd->add_option("--out", mode.out, "output JSON path, or - for stdout");

    BenchmarkOptions bench;
    CLI::App* bench_cmd =
        app.add_subcommand("benchmark", "run a regression experiment and write reports");
    bench_cmd->add_option("experiment", bench.experiment, "experiment name")
        ->required()
        ->check(CLI::IsMember({"sine", "ambiguous"}));
    bench_cmd->add_option("--n", bench.n, "dataset size")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--s", bench.s, "joint bandwidth (comma separated or single value)");
    bench_cmd->add_option("--sigma", bench.sigma, "generator noise")->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--q", bench.q, "mode-search sample count")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--queries", bench.queries, "number of query points");
    bench_cmd->add_option("--dataset-seed", bench.dataset_seed, "dataset RNG seed");
    bench_cmd->add_option("--predict-seed", bench.predict_seed, "prediction RNG seed");
    bench_cmd->add_option("--prune", bench.prune, "relative prune threshold");
    bench_cmd->add_flag("--no-refine", bench.no_refine, "skip gradient-ascent refinement");
    bench_cmd->add_option("--out", bench.out, "output file prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // help/version
        app.exit(e);
        return 2;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*fit_cmd) return run_fit(fit);
        if (*predict_cmd) return run_predict(predict);
        if (*mode_cmd) return run_mode(mode);
        if (*bench_cmd) return run_benchmark(bench);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
