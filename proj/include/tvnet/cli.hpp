#pragma once

// Pipeline driver behind the tvnet executable. Every subcommand reads one JSON
// run configuration (all keys optional, unknown keys rejected):
//
//   {
//     "seed": 0,
//     "setting":  {"mode": "ar", "lags": 2, "mask": null},
//     "link":     "identity",
//     "kernel":   {"shape": "gaussian", "bandwidth": 10},
//     "penalty":  {"kind": "granger", "lambda": 0.1, "lambda_latent": 0, "joint_slope": true},
//     "solver":   {"s0": 1, "t_max": 2000, "tol": 1e-5, "freeze_slope": false},
//     "detect":   {"gamma": 1, "strategy": "fast", "smooth_boundaries": true, "min_window": 3},
//     "pna":      {"rank": 2, "lambda_star": 0.01, "lambda_1": 0.1, "t_max": 5000,
//                  "delta": 1e-6, "init": "svd"},
//     "generate": {"nodes": 25, "rank": 2, "changepoints": 1, "lags": 2, "length": 250, ...},
//     "eval":     {"window": 10},
//     "roc":      {"gammas": [0, 0.5, 1, 2, "inf"]}
//   }
//
// "mask" names an m x p CSV of 0/1 entries. Gamma accepts "inf". The worker
// count is not part of the configuration: it comes from TVNET_WORKERS or
// --workers and never changes any output byte.
//
// Exit codes: 0 success, 1 invalid input, 2 solver failure, 3 file errors.

#include "tvnet/changepoint.hpp"
#include "tvnet/io.hpp"
#include "tvnet/pna.hpp"
#include "tvnet/synth.hpp"
#include "tvnet/tvgraph.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace tvnet {

struct RunConfig {
    std::uint64_t seed = 0;
    Mode mode = Mode::DirectedAR;
    Index lags = 2;
    std::optional<fs::path> mask;
    std::string link = "identity";
    KernelShape shape = KernelShape::Gaussian;
    double bandwidth = 10.0;
    /// Unset means lag groups for AR and symmetric pairs for undirected data.
    std::optional<PenaltyKind> penalty_kind;
    double lambda = 0.1;
    double lambda_latent = 0.0;
    bool joint_slope = true;
    FitOptions solver;
    double gamma = 1.0;
    DetectionStrategy strategy = DetectionStrategy::Fast;
    bool smooth_boundaries = true;
    Index min_window = 3;
    Index rank = 2;
    double lambda_star = 0.01;
    double lambda_1 = 0.1;
    IpalmConfig ipalm;
    SynthConfig generate;
    Index window = 10;
    std::vector<double> gammas{0.0, 0.5, 1.0, 2.0, std::numeric_limits<double>::infinity()};

    /// Strict parse; throws ParameterError on unknown keys or bad values.
    static RunConfig from_json(const Json& j);
    /// Canonical echo of every setting, used in manifests.
    Json to_json() const;
    void validate() const;

    RegressionSetting setting(Index nodes) const;
    LinkSpec link_spec() const;
    PenaltySpec penalty(const RegressionSetting& setting) const;
    ChangepointConfig changepoint() const;
    FitOptions fit_options(unsigned workers) const;
};

RunConfig load_run_config(const fs::path& path);

void cmd_generate(const RunConfig& cfg, const fs::path& out_dir);

/// One-sided or centre fit only; writes a graph sequence at `out_stem`.
void cmd_fit(const RunConfig& cfg, const fs::path& panel, KernelSide side, const fs::path& out_stem,
             unsigned workers);

/// Writes <out>/estimate and <out>/report, plus <out>/left|center|right when
/// `emit_sides` is set.
void cmd_detect(const RunConfig& cfg, const fs::path& panel, const fs::path& out_dir, bool emit_sides,
                unsigned workers);

/// Factorizes a stored graph sequence; also writes <out_stem>.scree.csv.
void cmd_pna(const RunConfig& cfg, const fs::path& graphs, const fs::path& out_stem);

struct EvalInputs {
    fs::path truth;
    std::optional<fs::path> graphs;
    std::optional<fs::path> factorization;
    std::optional<fs::path> report;
};

/// Writes <out>/metrics.json, one ROC table per eigennetwork and the
/// per-time trajectory error.
void cmd_eval(const RunConfig& cfg, const EvalInputs& inputs, const fs::path& out_dir);

/// Gamma sweep from a single exhaustive residual table; writes
/// <out>/gamma_sweep.csv.
void cmd_roc(const RunConfig& cfg, const fs::path& panel, const std::optional<fs::path>& truth,
             const fs::path& out_dir, unsigned workers);

/// Exit code for an exception escaping a subcommand.
int exit_code_for(const std::exception& e);

int run_cli(int argc, char** argv);

}  // namespace tvnet
