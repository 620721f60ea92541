#include "s3c/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace s3c {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << contents;
    if (!out) throw DataError("write to " + path.string() + " failed");
}

double parse_cell(std::string_view cell, const std::filesystem::path& path, size_t line,
                  size_t column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw DataError(path.string() + ": non-numeric cell '" + std::string(cell) + "' at line " +
                        std::to_string(line) + ", column " + std::to_string(column));
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> cells;
    size_t start = 0;
    while (true) {
        const size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Matrix load_table(const std::filesystem::path& path, TableFormat format) {
    const char sep = format == TableFormat::tsv ? '\t' : ',';
    const std::string text = read_file(path);
    std::vector<std::vector<double>> rows;
    size_t line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string_view line(text.data() + start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line, sep);
        std::vector<double> row;
        row.reserve(cells.size());
        for (size_t c = 0; c < cells.size(); ++c) {
            row.push_back(parse_cell(trim(cells[c]), path, line_no, c + 1));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DataError(path.string() + ": line " + std::to_string(line_no) + " has " +
                            std::to_string(row.size()) + " cells, expected " +
                            std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(path.string() + ": empty file");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        for (size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
        }
    }
    return m;
}

Matrix load_table(const std::filesystem::path& path) {
    return load_table(path, path.extension() == ".tsv" ? TableFormat::tsv : TableFormat::csv);
}

void save_table(const std::filesystem::path& path, const Matrix& values, TableFormat format) {
    const char sep = format == TableFormat::tsv ? '\t' : ',';
    std::string out;
    for (Index r = 0; r < values.rows(); ++r) {
        for (Index c = 0; c < values.cols(); ++c) {
            if (c) out += sep;
            out += format_double(values(r, c));
        }
        out += '\n';
    }
    write_file(path, out);
}

void save_table(const std::filesystem::path& path, const Matrix& values) {
    save_table(path, values, path.extension() == ".tsv" ? TableFormat::tsv : TableFormat::csv);
}

std::vector<int> load_labels(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::vector<int> labels;
    size_t line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        const std::string cell = trim(std::string_view(text.data() + start, end - start));
        start = end + 1;
        ++line_no;
        if (cell.empty()) continue;
        int value = 0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc{} || ptr != cell.data() + cell.size() || value < 1) {
            throw DataError(path.string() + ": expected a positive label at line " +
                            std::to_string(line_no) + ", got '" + cell + "'");
        }
        labels.push_back(value);
    }
    if (labels.empty()) throw DataError(path.string() + ": no labels found");
    return labels;
}

void save_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
    std::string out;
    for (int l : labels) {
        out += std::to_string(l);
        out += '\n';
    }
    write_file(path, out);
}

std::vector<Constraint> load_constraints(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::vector<Constraint> constraints;
    std::set<std::pair<int, int>> seen;
    size_t line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string_view line(text.data() + start, end - start);
        start = end + 1;
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto cells = split(stripped, ',');
        if (cells.size() != 3) {
            throw DataError(path.string() + ": line " + std::to_string(line_no) +
                            " must be 'i,j,must' or 'i,j,cannot'");
        }
        Constraint c;
        const std::string a = trim(cells[0]), b = trim(cells[1]), kind = trim(cells[2]);
        try {
            c.i = std::stoi(a);
            c.j = std::stoi(b);
        } catch (const std::exception&) {
            throw DataError(path.string() + ": bad index at line " + std::to_string(line_no));
        }
        if (c.i < 1 || c.j < 1) {
            throw DataError(path.string() + ": indices are 1-based at line " +
                            std::to_string(line_no));
        }
        if (c.i == c.j) {
            throw DataError(path.string() + ": self-pair at line " + std::to_string(line_no));
        }
        if (kind == "must") {
            c.type = LinkType::must_link;
        } else if (kind == "cannot") {
            c.type = LinkType::cannot_link;
        } else {
            throw DataError(path.string() + ": unknown link type '" + kind + "' at line " +
                            std::to_string(line_no));
        }
        const auto key = std::minmax(c.i, c.j);
        if (!seen.insert({key.first, key.second}).second) {
            throw DataError(path.string() + ": pair (" + a + "," + b +
                            ") duplicated at line " + std::to_string(line_no));
        }
        constraints.push_back(c);
    }
    return constraints;
}

void save_constraints(const std::filesystem::path& path,
                      const std::vector<Constraint>& constraints) {
    std::string out;
    for (const Constraint& c : constraints) {
        out += std::to_string(c.i);
        out += ',';
        out += std::to_string(c.j);
        out += c.type == LinkType::must_link ? ",must\n" : ",cannot\n";
    }
    write_file(path, out);
}

namespace {

Schedule parse_schedule(const std::string& s) {
    if (s == "fixed") return Schedule::fixed;
    if (s == "grow-alpha") return Schedule::grow_alpha;
    if (s == "grow-alpha-shrink-l1") return Schedule::grow_alpha_shrink_l1;
    throw DataError("unknown schedule '" + s + "'");
}

void set_optional(std::optional<double>& slot, const json& value) {
    if (value.is_null()) {
        slot.reset();
    } else {
        slot = value.get<double>();
    }
}

json optional_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

S3cConfig RunConfig::s3c_config() const {
    S3cConfig cfg;
    if (method == "ssc" || method == "s3c-hard" || method == "cs3c-hard") {
        cfg.mode = ThetaMode::hard;
    } else if (method == "s3c-soft" || method == "cs3c-soft") {
        cfg.mode = ThetaMode::soft;
    } else {
        throw DataError("unknown method '" + method + "'");
    }
    cfg.lambda0 = lambda0;
    cfg.alpha = alpha;
    cfg.schedule = parse_schedule(schedule);
    cfg.nu = nu;
    cfg.t_max = t_max;
    cfg.stop.theta_eps = stop_eps1;
    cfg.stop.c_eps = stop_eps2;
    cfg.stop.norm_eps = stop_eps3;
    cfg.stop.kmeans_eps = stop_eps4;
    cfg.n_clusters = n_clusters > 0 ? n_clusters : synth_subspaces;
    cfg.seed = seed;
    cfg.kmeans_restarts = kmeans_restarts;
    cfg.rho = rho;
    cfg.admm_eps = admm_eps;
    cfg.admm_max_iters = admm_max_iters;
    if (noise == "l1") {
        cfg.noise = NoiseModel::l1;
    } else if (noise == "frobenius") {
        cfg.noise = NoiseModel::frobenius;
    } else {
        throw DataError("unknown noise model '" + noise + "'");
    }
    return cfg;
}

SynthSpec RunConfig::synth_spec() const {
    SynthSpec spec;
    spec.ambient_dim = synth_ambient_dim;
    spec.subspace_dim = synth_subspace_dim;
    spec.subspaces = synth_subspaces;
    spec.points_per = synth_points_per;
    spec.corruption = synth_corruption;
    spec.noise_factor = synth_noise_factor;
    spec.seed = seed;
    return spec;
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw DataError("config must be a JSON object");
    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "method") value.get_to(cfg.method);
            else if (key == "lambda0") value.get_to(cfg.lambda0);
            else if (key == "alpha") set_optional(cfg.alpha, value);
            else if (key == "schedule") value.get_to(cfg.schedule);
            else if (key == "nu") value.get_to(cfg.nu);
            else if (key == "t_max") value.get_to(cfg.t_max);
            else if (key == "stop_eps1") set_optional(cfg.stop_eps1, value);
            else if (key == "stop_eps2") set_optional(cfg.stop_eps2, value);
            else if (key == "stop_eps3") set_optional(cfg.stop_eps3, value);
            else if (key == "stop_eps4") set_optional(cfg.stop_eps4, value);
            else if (key == "n_clusters") value.get_to(cfg.n_clusters);
            else if (key == "seed") value.get_to(cfg.seed);
            else if (key == "kmeans_restarts") value.get_to(cfg.kmeans_restarts);
            else if (key == "rho") value.get_to(cfg.rho);
            else if (key == "admm_eps") value.get_to(cfg.admm_eps);
            else if (key == "admm_max_iters") value.get_to(cfg.admm_max_iters);
            else if (key == "noise") value.get_to(cfg.noise);
            else if (key == "normalize") value.get_to(cfg.normalize);
            else if (key == "synth_ambient_dim") value.get_to(cfg.synth_ambient_dim);
            else if (key == "synth_subspace_dim") value.get_to(cfg.synth_subspace_dim);
            else if (key == "synth_subspaces") value.get_to(cfg.synth_subspaces);
            else if (key == "synth_points_per") value.get_to(cfg.synth_points_per);
            else if (key == "synth_corruption") value.get_to(cfg.synth_corruption);
            else if (key == "synth_noise_factor") value.get_to(cfg.synth_noise_factor);
            else if (key == "fraction") value.get_to(cfg.fraction);
            else if (key == "trials") value.get_to(cfg.trials);
            else if (key == "levels") value.get_to(cfg.levels);
            else if (key == "fractions") value.get_to(cfg.fractions);
            else if (key == "methods") value.get_to(cfg.methods);
            else if (key == "threads") value.get_to(cfg.threads);
            else throw DataError("unknown config key '" + key + "'");
        } catch (const json::exception& e) {
            throw DataError("config key '" + key + "': " + e.what());
        }
    }
    return cfg;
}

json config_to_json(const RunConfig& c) {
    return json{{"method", c.method},
                {"lambda0", c.lambda0},
                {"alpha", optional_to_json(c.alpha)},
                {"schedule", c.schedule},
                {"nu", c.nu},
                {"t_max", c.t_max},
                {"stop_eps1", optional_to_json(c.stop_eps1)},
                {"stop_eps2", optional_to_json(c.stop_eps2)},
                {"stop_eps3", optional_to_json(c.stop_eps3)},
                {"stop_eps4", optional_to_json(c.stop_eps4)},
                {"n_clusters", c.n_clusters},
                {"seed", c.seed},
                {"kmeans_restarts", c.kmeans_restarts},
                {"rho", c.rho},
                {"admm_eps", c.admm_eps},
                {"admm_max_iters", c.admm_max_iters},
                {"noise", c.noise},
                {"normalize", c.normalize},
                {"synth_ambient_dim", c.synth_ambient_dim},
                {"synth_subspace_dim", c.synth_subspace_dim},
                {"synth_subspaces", c.synth_subspaces},
                {"synth_points_per", c.synth_points_per},
                {"synth_corruption", c.synth_corruption},
                {"synth_noise_factor", c.synth_noise_factor},
                {"fraction", c.fraction},
                {"trials", c.trials},
                {"levels", c.levels},
                {"fractions", c.fractions},
                {"methods", c.methods},
                {"threads", c.threads}};
}

RunConfig load_config(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

void save_config(const std::filesystem::path& path, const RunConfig& config) {
    write_file(path, config_to_json(config).dump(2) + "\n");
}

std::string matrix_digest(const Matrix& values) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(values.data());
    const size_t n = static_cast<size_t>(values.size()) * sizeof(double);
    for (size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

json history_to_json(const ClusterResult& result) {
    json iterations = json::array();
    for (const IterationRecord& rec : result.history) {
        iterations.push_back(json{{"t", rec.t},
                                  {"structured_norm", rec.structured_norm},
                                  {"kmeans_cost", rec.kmeans_cost},
                                  {"admm_iters", rec.admm_iters},
                                  {"rel_change_theta", optional_to_json(rec.rel_change_theta)},
                                  {"rel_change_c", optional_to_json(rec.rel_change_c)},
                                  {"c_digest", matrix_digest(rec.coefficients)},
                                  {"theta_digest", matrix_digest(rec.theta)}});
    }
    return json{{"stop_reason", to_string(result.stop_reason)}, {"iterations", iterations}};
}

json report_to_json(const EvalReport& report) {
    return json{{"err", report.err},
                {"spr", report.spr},
                {"conn", report.conn},
                {"per_class_conn", report.per_class_conn},
                {"spr_zero_columns", report.zero_columns}};
}

}  // namespace s3c
