#pragma once

// On-disk formats. Every artifact is one or more CSV payloads plus a JSON
// manifest named <stem>.manifest.json. Time, node and lag indices in files
// are 1-based. Numbers use the shortest representation that reads back to
// the same double, so writing the same value twice gives identical bytes.

#include "tvnet/changepoint.hpp"
#include "tvnet/eval.hpp"
#include "tvnet/pna.hpp"
#include "tvnet/synth.hpp"
#include "tvnet/tvgraph.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tvnet {

namespace fs = std::filesystem;
using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Shortest round-trip decimal text; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double value);
/// Parse a full cell as a double; throws ParseError at (row, column) on failure.
double parse_double(std::string_view cell, Index row, Index column);

struct Manifest {
    std::string kind;
    /// Shape fields such as N, K, M, m, p, R, S.
    Json shape = Json::object();
    std::optional<std::uint64_t> seed;
    /// Echo of every parameter that produced the artifact.
    Json config = Json::object();
    /// Creation time; left out unless set, so repeated runs stay byte-identical.
    std::optional<std::string> created;
    /// Artifact-specific metadata (regression setting, kernel side, ...).
    Json attributes = Json::object();

    Json to_json() const;
    static Manifest from_json(const Json& j);
};

fs::path manifest_path(const fs::path& stem);
void write_manifest(const fs::path& stem, const Manifest& manifest);
/// Throws MissingMetadataError when the manifest is absent and IntegrityError
/// when its kind differs from `expected_kind`.
Manifest read_manifest(const fs::path& stem, const std::string& expected_kind);

/// Write text atomically enough for our purposes: truncate and write.
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

/// Dense matrix with a header row of 1-based column indices.
void write_matrix_csv(const fs::path& path, const Matrix& M);
Matrix read_matrix_csv(const fs::path& path);

/// N x K panel; the header holds the time indices 1..K.
void write_panel(const fs::path& path, const TimeSeriesPanel& panel);
TimeSeriesPanel read_panel(const fs::path& path);

/// Graph sequence as <stem>.edges.csv (k,i,j,lag,weight), <stem>.slope.csv,
/// optional <stem>.latent.csv, and a manifest carrying the setting.
void write_graph_sequence(const fs::path& stem, const GraphSequence& seq, const Json& config = Json::object());
GraphSequence read_graph_sequence(const fs::path& stem);

/// Factorization as <stem>.C.csv (K x R), <stem>.B.csv (r,i,j,lag,weight),
/// <stem>.history.csv and a manifest.
void write_factorization(const fs::path& stem, const Factorization& f, const RegressionSetting& setting,
                         const Json& config = Json::object());
struct StoredFactorization {
    Factorization factorization;
    RegressionSetting setting;
    Manifest manifest;
};
StoredFactorization read_factorization(const fs::path& stem);

/// Synthetic bundle in a directory: panel.csv, truth factorization, true
/// changepoints and a manifest with the generator configuration.
void write_ground_truth(const fs::path& dir, const GroundTruth& gt);
struct StoredGroundTruth {
    TimeSeriesPanel panel;
    StoredFactorization truth;
    std::vector<Index> changepoints;  ///< 0-based
    SynthConfig config;

    GraphSequence graphs() const;
};
StoredGroundTruth read_ground_truth(const fs::path& dir);

/// Selection and residual table (k, selected, left, center, right) plus the
/// detected changepoints (1-based k of the last point before the switch).
void write_changepoint_report(const fs::path& stem, const ChangepointReport& report,
                              const Json& config = Json::object());
ChangepointReport read_changepoint_report(const fs::path& stem);

void write_changepoints(const fs::path& path, const std::vector<Index>& changepoints);
std::vector<Index> read_changepoints(const fs::path& path);

Json synth_config_to_json(const SynthConfig& cfg);
SynthConfig synth_config_from_json(const Json& j);

Json setting_to_json(const RegressionSetting& setting);
RegressionSetting setting_from_json(const Json& j);

}  // namespace tvnet
