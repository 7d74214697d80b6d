#include "tvnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

namespace tvnet {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw NumericError("could not format a double");
    return std::string(buf, end);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

double parse_double(std::string_view cell, Index row, Index column) {
    const std::string_view s = trim(cell);
    if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(column) +
                             ": cannot parse '" + std::string(s) + "' as a number",
                         row, column);
    return value;
}

namespace {

Index parse_index(std::string_view cell, Index row, Index column) {
    const std::string_view s = trim(cell);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(column) +
                             ": expected an integer, got '" + std::string(s) + "'",
                         row, column);
    return static_cast<Index>(value);
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// Rows are numbered as lines in the file (the header is row 1).
Table read_table(const fs::path& path) {
    const std::string text = read_text(path);
    Table t;
    std::istringstream in(text);
    std::string line;
    Index row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (row == 1) {
            if (line.empty()) throw ParseError(path.string() + ": missing header", 1, 0);
            t.header = split(line);
            continue;
        }
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size())
            throw ParseError(path.string() + ": row " + std::to_string(row) + " has " +
                                 std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(t.header.size()),
                             row, static_cast<Index>(std::min(cells.size(), t.header.size())) + 1);
        t.rows.push_back(std::move(cells));
    }
    if (row == 0) throw ParseError(path.string() + ": empty file", 0, 0);
    return t;
}

void expect_header(const Table& t, const std::vector<std::string>& names, const fs::path& path) {
    if (t.header.size() != names.size())
        throw ParseError(path.string() + ": unexpected header", 1, 0);
    for (std::size_t c = 0; c < names.size(); ++c)
        if (std::string(trim(t.header[c])) != names[c])
            throw ParseError(path.string() + ": expected column '" + names[c] + "'", 1,
                             static_cast<Index>(c) + 1);
}

std::string stem_file(const fs::path& stem, const std::string& suffix) { return stem.string() + suffix; }

Index shape_field(const Manifest& m, const char* key) {
    if (!m.shape.contains(key) || !m.shape[key].is_number_integer())
        throw IntegrityError("manifest of kind '" + m.kind + "' lacks shape field '" + key + "'");
    return m.shape[key].get<Index>();
}

void check_index(Index value, Index upper, const char* name, Index row, Index column, const fs::path& path) {
    if (value < 1 || value > upper)
        throw IntegrityError(path.string() + ": row " + std::to_string(row) + ", column " +
                             std::to_string(column) + ": " + name + " = " + std::to_string(value) +
                             " outside [1, " + std::to_string(upper) + "]");
}

// (k, i, j, lag, weight) lines for the nonzero masked entries of Acal-like data.
std::string edge_list(const Matrix& rows, const RegressionSetting& setting, const char* first_column) {
    std::string out = std::string(first_column) + ",i,j,lag,weight\n";
    const Index m = setting.rows();
    const Index N = setting.nodes();
    const Index lags = setting.mode() == Mode::DirectedAR ? setting.lags() : 1;
    for (Index k = 0; k < rows.rows(); ++k)
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < N; ++j)
                for (Index l = 0; l < lags; ++l) {
                    const Index col = setting.mode() == Mode::DirectedAR ? setting.column(j, l) : j;
                    if (setting.mask()(i, col) == 0.0) continue;
                    const double w = rows(k, col * m + i);
                    if (w == 0.0) continue;
                    out += std::to_string(k + 1) + ',' + std::to_string(i + 1) + ',' + std::to_string(j + 1) +
                           ',' + std::to_string(l + 1) + ',' + format_double(w) + '\n';
                }
    return out;
}

Matrix read_edge_list(const fs::path& path, const RegressionSetting& setting, Index count,
                      const char* first_column) {
    const Table t = read_table(path);
    expect_header(t, {first_column, "i", "j", "lag", "weight"}, path);
    const Index m = setting.rows();
    const Index lags = setting.mode() == Mode::DirectedAR ? setting.lags() : 1;
    Matrix out = Matrix::Zero(count, setting.size());
    Matrix seen = Matrix::Zero(count, setting.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& cells = t.rows[r];
        const Index row = static_cast<Index>(r) + 2;
        const Index k = parse_index(cells[0], row, 1);
        const Index i = parse_index(cells[1], row, 2);
        const Index j = parse_index(cells[2], row, 3);
        const Index l = parse_index(cells[3], row, 4);
        const double w = parse_double(cells[4], row, 5);
        check_index(k, count, first_column, row, 1, path);
        check_index(i, m, "i", row, 2, path);
        check_index(j, setting.nodes(), "j", row, 3, path);
        check_index(l, lags, "lag", row, 4, path);
        if (!std::isfinite(w))
            throw IntegrityError(path.string() + ": row " + std::to_string(row) + ": non-finite weight");
        const Index col = setting.mode() == Mode::DirectedAR ? setting.column(j - 1, l - 1) : j - 1;
        if (setting.mask()(i - 1, col) == 0.0)
            throw IntegrityError(path.string() + ": row " + std::to_string(row) + ": edge (" + std::to_string(i) +
                                 ", " + std::to_string(j) + ", " + std::to_string(l) +
                                 ") is structurally zero");
        const Index flat = col * m + (i - 1);
        if (seen(k - 1, flat) != 0.0)
            throw IntegrityError(path.string() + ": row " + std::to_string(row) + ": duplicate entry");
        seen(k - 1, flat) = 1.0;
        out(k - 1, flat) = w;
    }
    return out;
}

Json mask_zeros(const RegressionSetting& setting) {
    Json zeros = Json::array();
    const Index m = setting.rows();
    const Index lags = setting.mode() == Mode::DirectedAR ? setting.lags() : 1;
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < setting.nodes(); ++j)
            for (Index l = 0; l < lags; ++l) {
                const Index col = setting.mode() == Mode::DirectedAR ? setting.column(j, l) : j;
                if (setting.mode() == Mode::UndirectedExtemporaneous && i == j) continue;
                if (setting.mask()(i, col) == 0.0) zeros.push_back({i + 1, j + 1, l + 1});
            }
    return zeros;
}

std::string side_name(const std::optional<KernelSide>& side) {
    return side ? std::string(to_string(*side)) : std::string("assembled");
}

std::optional<KernelSide> side_value(const std::string& name) {
    if (name == "assembled") return std::nullopt;
    return side_from_string(name);
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

Json json_double(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

double double_from_json(const Json& j) {
    if (j.is_string()) return parse_double(j.get<std::string>(), 0, 0);
    return j.get<double>();
}

}  // namespace

Json Manifest::to_json() const {
    Json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = kind;
    j["shape"] = shape;
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    j["config"] = config;
    j["attributes"] = attributes;
    if (created) j["created"] = *created;
    return j;
}

Manifest Manifest::from_json(const Json& j) {
    try {
        Manifest m;
        const int version = j.at("format_version").get<int>();
        if (version != kFormatVersion)
            throw IntegrityError("unsupported format version " + std::to_string(version));
        m.kind = j.at("kind").get<std::string>();
        m.shape = j.at("shape");
        if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
        m.config = j.value("config", Json::object());
        m.attributes = j.value("attributes", Json::object());
        if (j.contains("created")) m.created = j["created"].get<std::string>();
        return m;
    } catch (const Json::exception& e) {
        throw IntegrityError(std::string("malformed manifest: ") + e.what());
    }
}

fs::path manifest_path(const fs::path& stem) { return fs::path(stem.string() + ".manifest.json"); }

void write_manifest(const fs::path& stem, const Manifest& manifest) {
    write_text(manifest_path(stem), manifest.to_json().dump(2) + "\n");
}

Manifest read_manifest(const fs::path& stem, const std::string& expected_kind) {
    const fs::path path = manifest_path(stem);
    if (!fs::exists(path)) throw MissingMetadataError("manifest not found: " + path.string());
    Json j;
    try {
        j = Json::parse(read_text(path));
    } catch (const Json::parse_error& e) {
        throw IntegrityError(path.string() + ": " + e.what());
    }
    Manifest m = Manifest::from_json(j);
    if (m.kind != expected_kind)
        throw IntegrityError(path.string() + ": expected kind '" + expected_kind + "', found '" + m.kind + "'");
    return m;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_matrix_csv(const fs::path& path, const Matrix& M) {
    if (M.cols() == 0) throw ShapeError("cannot write a matrix without columns");
    std::string out;
    for (Index c = 0; c < M.cols(); ++c) out += (c ? "," : "") + std::to_string(c + 1);
    out += '\n';
    for (Index r = 0; r < M.rows(); ++r) {
        for (Index c = 0; c < M.cols(); ++c) out += (c ? "," : "") + format_double(M(r, c));
        out += '\n';
    }
    write_text(path, out);
}

Matrix read_matrix_csv(const fs::path& path) {
    const Table t = read_table(path);
    for (std::size_t c = 0; c < t.header.size(); ++c)
        if (parse_index(t.header[c], 1, static_cast<Index>(c) + 1) != static_cast<Index>(c) + 1)
            throw ParseError(path.string() + ": header must hold 1, 2, ...", 1, static_cast<Index>(c) + 1);
    Matrix M(static_cast<Index>(t.rows.size()), static_cast<Index>(t.header.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        for (std::size_t c = 0; c < t.header.size(); ++c)
            M(static_cast<Index>(r), static_cast<Index>(c)) =
                parse_double(t.rows[r][c], static_cast<Index>(r) + 2, static_cast<Index>(c) + 1);
    return M;
}

void write_panel(const fs::path& path, const TimeSeriesPanel& panel) { write_matrix_csv(path, panel.data()); }

TimeSeriesPanel read_panel(const fs::path& path) {
    Matrix data = read_matrix_csv(path);
    if (data.rows() == 0) throw ParseError(path.string() + ": panel has no rows", 2, 0);
    for (Index r = 0; r < data.rows(); ++r)
        for (Index c = 0; c < data.cols(); ++c)
            if (!std::isfinite(data(r, c)))
                throw ParseError(path.string() + ": non-finite observation", r + 2, c + 1);
    return TimeSeriesPanel(std::move(data));
}

Json setting_to_json(const RegressionSetting& setting) {
    Json j;
    j["mode"] = std::string(to_string(setting.mode()));
    j["nodes"] = setting.nodes();
    j["lags"] = setting.lags();
    j["mask_zeros"] = mask_zeros(setting);
    return j;
}

RegressionSetting setting_from_json(const Json& j) {
    try {
        const Mode mode = mode_from_string(j.at("mode").get<std::string>());
        const Index N = j.at("nodes").get<Index>();
        RegressionSetting s = mode == Mode::DirectedAR ? RegressionSetting::directed_ar(N, j.at("lags").get<Index>())
                                                       : RegressionSetting::undirected(N);
        const Json zeros = j.value("mask_zeros", Json::array());
        if (zeros.empty()) return s;
        Matrix mask = s.mask();
        const Index lags = mode == Mode::DirectedAR ? s.lags() : 1;
        for (const auto& z : zeros) {
            const Index i = z.at(0).get<Index>(), src = z.at(1).get<Index>(), l = z.at(2).get<Index>();
            if (i < 1 || i > N || src < 1 || src > N || l < 1 || l > lags)
                throw IntegrityError("mask entry out of range");
            const Index col = mode == Mode::DirectedAR ? s.column(src - 1, l - 1) : src - 1;
            mask(i - 1, col) = 0.0;
        }
        return s.with_mask(std::move(mask));
    } catch (const Json::exception& e) {
        throw IntegrityError(std::string("malformed regression setting: ") + e.what());
    }
}

void write_graph_sequence(const fs::path& stem, const GraphSequence& seq, const Json& config) {
    const RegressionSetting& s = seq.setting;
    write_text(stem_file(stem, ".edges.csv"), edge_list(seq.Acal, s, "k"));
    write_text(stem_file(stem, ".slope.csv"), edge_list(seq.Aprime, s, "k"));
    if (seq.Lcal) write_matrix_csv(stem_file(stem, ".latent.csv"), *seq.Lcal);
    Manifest m;
    m.kind = "graph_sequence";
    m.shape = {{"N", s.nodes()}, {"K", seq.length()}, {"M", s.lags()}, {"m", s.rows()}, {"p", s.cols()}};
    m.config = config;
    m.attributes = {{"setting", setting_to_json(s)}, {"side", side_name(seq.side)}, {"latent", seq.Lcal.has_value()}};
    write_manifest(stem, m);
}

GraphSequence read_graph_sequence(const fs::path& stem) {
    const Manifest m = read_manifest(stem, "graph_sequence");
    GraphSequence seq;
    try {
        seq.setting = setting_from_json(m.attributes.at("setting"));
        seq.side = side_value(m.attributes.at("side").get<std::string>());
    } catch (const Json::exception& e) {
        throw IntegrityError(std::string("graph sequence manifest: ") + e.what());
    }
    const Index K = shape_field(m, "K");
    if (shape_field(m, "N") != seq.setting.nodes() || shape_field(m, "m") != seq.setting.rows() ||
        shape_field(m, "p") != seq.setting.cols())
        throw IntegrityError("graph sequence manifest: shape does not match the setting");
    seq.Acal = read_edge_list(stem_file(stem, ".edges.csv"), seq.setting, K, "k");
    seq.Aprime = read_edge_list(stem_file(stem, ".slope.csv"), seq.setting, K, "k");
    if (get_or(m.attributes, "latent", false)) {
        const fs::path lp = stem_file(stem, ".latent.csv");
        if (!fs::exists(lp)) throw DependencyError("latent block missing: " + lp.string());
        Matrix L = read_matrix_csv(lp);
        if (L.rows() != K || L.cols() != seq.setting.size())
            throw IntegrityError(lp.string() + ": latent block has the wrong shape");
        seq.Lcal = std::move(L);
    }
    return seq;
}

void write_factorization(const fs::path& stem, const Factorization& f, const RegressionSetting& setting,
                         const Json& config) {
    if (f.Bcal.rows() != setting.size()) throw ShapeError("factorization does not match the setting");
    write_matrix_csv(stem_file(stem, ".C.csv"), f.C);
    write_text(stem_file(stem, ".B.csv"), edge_list(f.Bcal.transpose(), setting, "r"));
    std::string hist = "iteration,objective\n";
    for (std::size_t t = 0; t < f.history.size(); ++t) hist += std::to_string(t) + ',' + format_double(f.history[t]) + '\n';
    write_text(stem_file(stem, ".history.csv"), hist);
    Manifest m;
    m.kind = "factorization";
    m.shape = {{"K", f.C.rows()},       {"R", f.rank()},      {"N", setting.nodes()},
               {"M", setting.lags()},   {"m", setting.rows()}, {"p", setting.cols()}};
    m.config = config;
    m.attributes = {{"setting", setting_to_json(setting)},
                    {"lambda_star", json_double(f.lambda_star)},
                    {"lambda_1", json_double(f.lambda_1)},
                    {"iterations", f.iterations},
                    {"converged", f.converged}};
    write_manifest(stem, m);
}

StoredFactorization read_factorization(const fs::path& stem) {
    StoredFactorization out;
    out.manifest = read_manifest(stem, "factorization");
    const Manifest& m = out.manifest;
    Factorization& f = out.factorization;
    try {
        out.setting = setting_from_json(m.attributes.at("setting"));
        f.lambda_star = double_from_json(m.attributes.at("lambda_star"));
        f.lambda_1 = double_from_json(m.attributes.at("lambda_1"));
        f.iterations = m.attributes.at("iterations").get<Index>();
        f.converged = m.attributes.at("converged").get<bool>();
    } catch (const Json::exception& e) {
        throw IntegrityError(std::string("factorization manifest: ") + e.what());
    }
    const Index K = shape_field(m, "K");
    const Index R = shape_field(m, "R");
    f.C = read_matrix_csv(stem_file(stem, ".C.csv"));
    if (f.C.rows() != K || f.C.cols() != R)
        throw IntegrityError(stem_file(stem, ".C.csv") + ": expected " + std::to_string(K) + " x " +
                             std::to_string(R) + " eigenfeatures");
    f.Bcal = read_edge_list(stem_file(stem, ".B.csv"), out.setting, R, "r").transpose();
    const fs::path hp = stem_file(stem, ".history.csv");
    if (fs::exists(hp)) {
        const Table t = read_table(hp);
        expect_header(t, {"iteration", "objective"}, hp);
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            f.history.push_back(parse_double(t.rows[r][1], static_cast<Index>(r) + 2, 2));
    }
    return out;
}

Json synth_config_to_json(const SynthConfig& cfg) {
    return {{"nodes", cfg.nodes},
            {"rank", cfg.rank},
            {"changepoints", cfg.changepoints},
            {"lags", cfg.lags},
            {"length", cfg.length},
            {"edge_prob", cfg.edge_prob},
            {"seed", cfg.seed},
            {"noise_std", cfg.noise_std},
            {"stabilize", cfg.stabilize},
            {"target_radius", cfg.target_radius},
            {"level_min", cfg.level_min},
            {"level_max", cfg.level_max},
            {"amp_min", cfg.amp_min},
            {"amp_max", cfg.amp_max},
            {"period", cfg.period},
            {"phases", cfg.phases}};
}

SynthConfig synth_config_from_json(const Json& j) {
    static const std::vector<std::string> known = {
        "nodes",      "rank",      "changepoints", "lags",      "length",  "edge_prob", "seed",  "noise_std",
        "stabilize",  "target_radius", "level_min", "level_max", "amp_min", "amp_max",   "period", "phases"};
    if (!j.is_object()) throw ParameterError("generator configuration must be an object");
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ParameterError("unknown generator option '" + key + "'");
    SynthConfig c;
    try {
        c.nodes = get_or(j, "nodes", c.nodes);
        c.rank = get_or(j, "rank", c.rank);
        c.changepoints = get_or(j, "changepoints", c.changepoints);
        c.lags = get_or(j, "lags", c.lags);
        c.length = get_or(j, "length", c.length);
        c.edge_prob = get_or(j, "edge_prob", c.edge_prob);
        c.seed = get_or(j, "seed", c.seed);
        c.noise_std = get_or(j, "noise_std", c.noise_std);
        c.stabilize = get_or(j, "stabilize", c.stabilize);
        c.target_radius = get_or(j, "target_radius", c.target_radius);
        c.level_min = get_or(j, "level_min", c.level_min);
        c.level_max = get_or(j, "level_max", c.level_max);
        c.amp_min = get_or(j, "amp_min", c.amp_min);
        c.amp_max = get_or(j, "amp_max", c.amp_max);
        c.period = get_or(j, "period", c.period);
        c.phases = get_or(j, "phases", c.phases);
    } catch (const Json::exception& e) {
        throw ParameterError(std::string("generator configuration: ") + e.what());
    }
    c.validate();
    return c;
}

void write_ground_truth(const fs::path& dir, const GroundTruth& gt) {
    write_panel(dir / "panel.csv", gt.panel);
    Factorization truth;
    truth.C = gt.weights;
    truth.Bcal = gt.eigennetwork_matrix();
    truth.converged = true;
    write_factorization(dir / "truth", truth, gt.setting);
    write_changepoints(dir / "changepoints.csv", gt.changepoints);
    Manifest m;
    m.kind = "ground_truth";
    m.shape = {{"N", gt.config.nodes},
               {"K", gt.config.length},
               {"M", gt.config.lags},
               {"R", gt.config.rank},
               {"S", gt.config.changepoints}};
    m.seed = gt.config.seed;
    m.config = synth_config_to_json(gt.config);
    m.attributes = {{"scale", gt.scale}};
    write_manifest(dir / "ground_truth", m);
}

StoredGroundTruth read_ground_truth(const fs::path& dir) {
    const Manifest m = read_manifest(dir / "ground_truth", "ground_truth");
    StoredGroundTruth out;
    out.config = synth_config_from_json(m.config);
    const fs::path panel = dir / "panel.csv";
    if (!fs::exists(panel)) throw DependencyError("panel missing: " + panel.string());
    out.panel = read_panel(panel);
    if (out.panel.nodes() != shape_field(m, "N") || out.panel.length() != shape_field(m, "K"))
        throw IntegrityError(panel.string() + ": shape does not match the manifest");
    out.truth = read_factorization(dir / "truth");
    if (out.truth.factorization.rank() != shape_field(m, "R") || out.truth.factorization.C.rows() != shape_field(m, "K"))
        throw IntegrityError("true factorization does not match the ground-truth manifest");
    out.changepoints = read_changepoints(dir / "changepoints.csv");
    if (static_cast<Index>(out.changepoints.size()) != shape_field(m, "S"))
        throw IntegrityError("changepoint count does not match the ground-truth manifest");
    return out;
}

GraphSequence StoredGroundTruth::graphs() const {
    const Factorization& f = truth.factorization;
    GraphSequence seq = GraphSequence::zeros(truth.setting, f.C.rows());
    seq.Acal = f.reconstruction();
    return seq;
}

void write_changepoints(const fs::path& path, const std::vector<Index>& changepoints) {
    std::string out = "k\n";
    for (Index c : changepoints) out += std::to_string(c + 1) + '\n';
    write_text(path, out);
}

std::vector<Index> read_changepoints(const fs::path& path) {
    const Table t = read_table(path);
    expect_header(t, {"k"}, path);
    std::vector<Index> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const Index k = parse_index(t.rows[r][0], static_cast<Index>(r) + 2, 1);
        if (k < 1) throw IntegrityError(path.string() + ": changepoint index must be >= 1");
        out.push_back(k - 1);
    }
    if (!std::is_sorted(out.begin(), out.end()) || std::adjacent_find(out.begin(), out.end()) != out.end())
        throw IntegrityError(path.string() + ": changepoints must be strictly increasing");
    return out;
}

void write_changepoint_report(const fs::path& stem, const ChangepointReport& report, const Json& config) {
    const Index K = static_cast<Index>(report.selection.size());
    if (report.residuals.rows() != 3 || report.residuals.cols() != K)
        throw ShapeError("residual table does not match the selection");
    std::string out = "k,selected,left,center,right\n";
    for (Index k = 0; k < K; ++k) {
        out += std::to_string(k + 1) + ',' + std::string(to_string(report.selection[static_cast<std::size_t>(k)]));
        for (Index s = 0; s < 3; ++s) out += ',' + format_double(report.residuals(s, k));
        out += '\n';
    }
    write_text(stem_file(stem, ".selection.csv"), out);
    write_changepoints(stem_file(stem, ".changepoints.csv"), report.changepoints);
    Manifest m;
    m.kind = "changepoint_report";
    m.shape = {{"K", K}, {"S", static_cast<Index>(report.changepoints.size())}};
    m.config = config;
    m.attributes = {{"gamma", json_double(report.gamma)}};
    write_manifest(stem, m);
}

ChangepointReport read_changepoint_report(const fs::path& stem) {
    const Manifest m = read_manifest(stem, "changepoint_report");
    ChangepointReport rep;
    try {
        rep.gamma = double_from_json(m.attributes.at("gamma"));
    } catch (const Json::exception& e) {
        throw IntegrityError(std::string("changepoint report manifest: ") + e.what());
    }
    const Index K = shape_field(m, "K");
    const fs::path sp = stem_file(stem, ".selection.csv");
    const Table t = read_table(sp);
    expect_header(t, {"k", "selected", "left", "center", "right"}, sp);
    if (static_cast<Index>(t.rows.size()) != K)
        throw IntegrityError(sp.string() + ": expected " + std::to_string(K) + " rows");
    rep.residuals = Matrix(3, K);
    for (Index k = 0; k < K; ++k) {
        const auto& cells = t.rows[static_cast<std::size_t>(k)];
        const Index row = k + 2;
        if (parse_index(cells[0], row, 1) != k + 1) throw IntegrityError(sp.string() + ": time indices out of order");
        try {
            rep.selection.push_back(side_from_string(trim(cells[1])));
        } catch (const ParameterError&) {
            throw ParseError(sp.string() + ": unknown estimator '" + cells[1] + "'", row, 2);
        }
        for (Index s = 0; s < 3; ++s) rep.residuals(s, k) = parse_double(cells[static_cast<std::size_t>(s) + 2], row, s + 3);
    }
    rep.changepoints = read_changepoints(stem_file(stem, ".changepoints.csv"));
    if (rep.changepoints != detect(rep.selection))
        throw IntegrityError("stored changepoints disagree with the stored selection");
    return rep;
}

}  // namespace tvnet
