#include "condmode/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace condmode::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

std::string location(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

void append_real_array(std::string& out, const std::vector<double>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_real(v[i]);
    }
    out += ']';
}

void append_nested_array(std::string& out, const char* key,
                         const std::vector<std::vector<double>>& rows) {
    out += "  \"";
    out += key;
    out += "\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += ',';
        append_real_array(out, rows[i]);
    }
    out += ']';
}

std::vector<std::vector<double>> coords_of(const std::vector<Point>& pts) {
    std::vector<std::vector<double>> rows;
    rows.reserve(pts.size());
    for (const Point& p : pts) rows.push_back(p.coords);
    return rows;
}

std::vector<std::vector<double>> scales_of(const std::vector<Bandwidth>& bws) {
    std::vector<std::vector<double>> rows;
    rows.reserve(bws.size());
    for (const Bandwidth& b : bws) rows.push_back(b.scales);
    return rows;
}

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back(); // tolerate CRLF input
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_real_cell(const std::string& cell, const std::filesystem::path& path,
                       std::size_t line) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || end != begin + cell.size() || !std::isfinite(v)) {
        fail(location(path, line) + ": cell '" + cell + "' is not a finite real");
    }
    return v;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) fail("write failed: " + path.string());
}

std::vector<double> real_array(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) {
        fail(std::string("model file: missing array field '") + key + "'");
    }
    std::vector<double> out;
    out.reserve(j[key].size());
    for (const auto& v : j[key]) {
        if (!v.is_number()) fail(std::string("model file: non-numeric entry in '") + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::vector<double>> nested_real_array(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) {
        fail(std::string("model file: missing array field '") + key + "'");
    }
    std::vector<std::vector<double>> out;
    out.reserve(j[key].size());
    for (const auto& row : j[key]) {
        if (!row.is_array()) fail(std::string("model file: '") + key + "' must hold arrays");
        std::vector<double> r;
        r.reserve(row.size());
        for (const auto& v : row) {
            if (!v.is_number()) {
                fail(std::string("model file: non-numeric entry in '") + key + "'");
            }
            r.push_back(v.get<double>());
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string model_to_json(const JointKernelModel& model, const ModelMetadata& metadata) {
    model.validate();
    std::string out = "{\n";
    out += "  \"version\": 1,\n";
    out += "  \"dx\": " + std::to_string(model.dx) + ",\n";
    out += "  \"dy\": " + std::to_string(model.dy) + ",\n";
    out += "  \"weights\": ";
    append_real_array(out, model.weights);
    out += ",\n";
    append_nested_array(out, "x_centers", coords_of(model.x_centers));
    out += ",\n";
    append_nested_array(out, "y_centers", coords_of(model.y_centers));
    out += ",\n";
    append_nested_array(out, "x_bandwidths", scales_of(model.x_bandwidths));
    out += ",\n";
    append_nested_array(out, "y_bandwidths", scales_of(model.y_bandwidths));
    if (!metadata.empty()) {
        out += ",\n  \"metadata\": {";
        bool first = true;
        for (const auto& [key, values] : metadata) {
            if (!first) out += ',';
            first = false;
            out += "\"" + key + "\": ";
            append_real_array(out, values);
        }
        out += '}';
    }
    out += "\n}\n";
    return out;
}

JointKernelModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("model file: ") + e.what());
    }
    if (!j.is_object()) fail("model file: top level must be an object");
    if (!j.contains("version") || !j["version"].is_number_integer() ||
        j["version"].get<int>() != 1) {
        fail("model file: unsupported or missing version");
    }
    if (!j.contains("dx") || !j.contains("dy")) fail("model file: missing dx/dy");

    JointKernelModel model;
    model.dx = j["dx"].get<std::size_t>();
    model.dy = j["dy"].get<std::size_t>();
    model.weights = real_array(j, "weights");
    for (auto& c : nested_real_array(j, "x_centers")) model.x_centers.push_back(Point{std::move(c)});
    for (auto& c : nested_real_array(j, "y_centers")) model.y_centers.push_back(Point{std::move(c)});
    for (auto& s : nested_real_array(j, "x_bandwidths")) model.x_bandwidths.push_back(Bandwidth{std::move(s)});
    for (auto& s : nested_real_array(j, "y_bandwidths")) model.y_bandwidths.push_back(Bandwidth{std::move(s)});
    try {
        model.validate();
    } catch (const std::invalid_argument& e) {
        fail(std::string("model file: ") + e.what());
    }
    return model;
}

void write_model_file(const std::filesystem::path& path, const JointKernelModel& model,
                      const ModelMetadata& metadata) {
    write_text(path, model_to_json(model, metadata));
}

JointKernelModel read_model_file(const std::filesystem::path& path) {
    try {
        return model_from_json(read_text(path));
    } catch (const std::runtime_error& e) {
        fail(path.string() + ": " + e.what());
    }
}

void write_dataset_file(const std::filesystem::path& path, const Dataset& data) {
    data.validate();
    std::string out;
    for (std::size_t k = 1; k <= data.dx; ++k) {
        out += "x" + std::to_string(k) + ",";
    }
    for (std::size_t k = 1; k <= data.dy; ++k) {
        out += "y" + std::to_string(k);
        out += (k == data.dy) ? "\n" : ",";
    }
    for (const DataRow& r : data.rows) {
        for (std::size_t k = 0; k < data.dx; ++k) {
            out += format_real(r.x[k]);
            out += ',';
        }
        for (std::size_t k = 0; k < data.dy; ++k) {
            out += format_real(r.y[k]);
            out += (k + 1 == data.dy) ? '\n' : ',';
        }
    }
    write_text(path, out);
}

namespace {

// Header must read x1..x<dx>[,y1..y<dy>]; returns (dx, dy), dy = 0 for query files.
std::pair<std::size_t, std::size_t> parse_header(const std::vector<std::string>& cells,
                                                 const std::filesystem::path& path,
                                                 bool allow_y) {
    std::size_t dx = 0;
    std::size_t dy = 0;
    std::size_t i = 0;
    while (i < cells.size() && cells[i] == "x" + std::to_string(i + 1)) {
        ++i;
        ++dx;
    }
    while (allow_y && i < cells.size() && cells[i] == "y" + std::to_string(dy + 1)) {
        ++i;
        ++dy;
    }
    if (dx == 0 || i != cells.size() || (allow_y && dy == 0)) {
        fail(location(path, 1) + ": malformed header (expected x1,..,x<dx>" +
             (allow_y ? ",y1,..,y<dy>)" : ")"));
    }
    return {dx, dy};
}

} // namespace

Dataset read_dataset_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) fail(location(path, 1) + ": empty file");
    const auto [dx, dy] = parse_header(split_csv_line(line), path, true);

    Dataset data;
    data.dx = dx;
    data.dy = dy;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != dx + dy) {
            fail(location(path, line_no) + ": expected " + std::to_string(dx + dy) +
                 " cells, got " + std::to_string(cells.size()));
        }
        DataRow row;
        for (std::size_t k = 0; k < dx; ++k) {
            row.x.coords.push_back(parse_real_cell(cells[k], path, line_no));
        }
        for (std::size_t k = 0; k < dy; ++k) {
            row.y.coords.push_back(parse_real_cell(cells[dx + k], path, line_no));
        }
        data.rows.push_back(std::move(row));
    }
    if (data.rows.empty()) fail(location(path, line_no) + ": no data rows");
    return data;
}

std::vector<Point> read_query_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) fail(location(path, 1) + ": empty file");
    const auto [d, dy] = parse_header(split_csv_line(line), path, false);
    (void)dy;

    std::vector<Point> queries;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != d) {
            fail(location(path, line_no) + ": expected " + std::to_string(d) + " cells");
        }
        Point p;
        for (const std::string& cell : cells) {
            p.coords.push_back(parse_real_cell(cell, path, line_no));
        }
        queries.push_back(std::move(p));
    }
    if (queries.empty()) fail(location(path, line_no) + ": no query rows");
    return queries;
}

ReportPaths write_experiment_report(const std::filesystem::path& prefix,
                                    const experiments::ExperimentReport& report) {
    ReportPaths paths;
    paths.records = prefix.string() + "_records.csv";
    paths.summary = prefix.string() + "_summary.json";
    paths.plot = prefix.string() + "_plot.csv";

    std::string records = "x,y_mode,y_nw,y_true,status\n";
    std::string plot = "x,y_mode,y_nw,y_true\n";
    for (const auto& r : report.records) {
        const std::string x = format_real(r.x);
        const std::string truth = format_real(r.y_true);
        if (r.ok) {
            const std::string ym = format_real(r.y_mode);
            const std::string yn = format_real(r.y_nw);
            records += x + "," + ym + "," + yn + "," + truth + ",ok\n";
            plot += x + "," + ym + "," + yn + "," + truth + "\n";
        } else {
            records += x + ",,," + truth + ",outside_support\n";
            plot += x + ",,," + truth + "\n";
        }
    }
    write_text(paths.records, records);
    write_text(paths.plot, plot);

    const auto& c = report.config;
    const auto& s = report.summary;
    const std::size_t ok_count = s.query_count - s.missing;
    auto rate = [ok_count](std::size_t count) {
        return ok_count == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(ok_count);
    };
    std::string bw;
    append_real_array(bw, c.bandwidth.scales);
    std::string summary = "{\n";
    summary += "  \"experiment\": \"" + report.experiment + "\",\n";
    summary += "  \"config\": {\n";
    summary += "    \"n\": " + std::to_string(c.n) + ",\n";
    summary += "    \"noise_sigma\": " + format_real(c.noise_sigma) + ",\n";
    summary += "    \"bandwidth\": " + bw + ",\n";
    summary += "    \"q\": " + std::to_string(c.q) + ",\n";
    summary += "    \"query_count\": " + std::to_string(c.query_count) + ",\n";
    summary += "    \"query_lo\": " + format_real(report.query_lo) + ",\n";
    summary += "    \"query_hi\": " + format_real(report.query_hi) + ",\n";
    summary += "    \"dataset_seed\": " + std::to_string(c.dataset_seed.value) + ",\n";
    summary += "    \"predict_seed\": " + std::to_string(c.predict_seed.value) + ",\n";
    summary += "    \"prune_threshold\": " + format_real(c.prune.relative_threshold) + ",\n";
    summary += std::string("    \"refine\": ") + (c.refine ? "true" : "false") + "\n";
    summary += "  },\n";
    summary += "  \"summary\": {\n";
    summary += "    \"query_count\": " + std::to_string(s.query_count) + ",\n";
    summary += "    \"missing\": " + std::to_string(s.missing) + ",\n";
    summary += "    \"mode_rmse\": " + format_real(s.mode_rmse) + ",\n";
    summary += "    \"nw_rmse\": " + format_real(s.nw_rmse) + ",\n";
    summary += "    \"mode_dead_zone\": " + std::to_string(s.mode_dead_zone) + ",\n";
    summary += "    \"nw_dead_zone\": " + std::to_string(s.nw_dead_zone) + ",\n";
    summary += "    \"mode_dead_zone_rate\": " + format_real(rate(s.mode_dead_zone)) + ",\n";
    summary += "    \"nw_dead_zone_rate\": " + format_real(rate(s.nw_dead_zone)) + "\n";
    summary += "  }\n";
    summary += "}\n";
    write_text(paths.summary, summary);
    return paths;
}

} // namespace condmode::io
