#pragma once

#include "condmode/density.hpp"
#include "condmode/experiments.hpp"
#include "condmode/regression.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace condmode::io {

/// Decimal rendering with 17 significant digits: lossless for 64-bit floats
/// and stable byte-for-byte across runs. Used by every file format here.
std::string format_real(double v);

/// Extra key/value arrays stored under "metadata" in a model file (for
/// example the bandwidth chosen by a leave-one-out grid search). Ignored
/// when a model is read back.
using ModelMetadata = std::map<std::string, std::vector<double>>;

std::string model_to_json(const JointKernelModel& model,
                          const ModelMetadata& metadata = {});
JointKernelModel model_from_json(const std::string& text);

void write_model_file(const std::filesystem::path& path, const JointKernelModel& model,
                      const ModelMetadata& metadata = {});
JointKernelModel read_model_file(const std::filesystem::path& path);

/// CSV with header x1,..,x<dx>,y1,..,y<dy>, one row per sample.
void write_dataset_file(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset_file(const std::filesystem::path& path);

/// CSV of query points with header x1,..,x<d>.
std::vector<Point> read_query_file(const std::filesystem::path& path);

struct ReportPaths {
    std::filesystem::path records; // per-query CSV
    std::filesystem::path summary; // metrics + config echo, JSON
    std::filesystem::path plot;    // x,y_mode,y_nw,y_true columns
};

/// Writes <prefix>_records.csv, <prefix>_summary.json and <prefix>_plot.csv.
ReportPaths write_experiment_report(const std::filesystem::path& prefix,
                                    const experiments::ExperimentReport& report);

} // namespace condmode::io
