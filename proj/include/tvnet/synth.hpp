#pragma once

// Synthetic benchmark: fixed sparse eigennetworks, piecewise-constant plus
// sinusoid eigenfeatures with random changepoints, and AR(M) data driven by
// the resulting time-varying graphs.

#include "tvnet/glm.hpp"
#include "tvnet/tvgraph.hpp"

#include <cstdint>
#include <vector>

namespace tvnet {

struct SynthConfig {
    Index nodes = 25;
    Index rank = 2;
    Index changepoints = 1;
    Index lags = 2;
    Index length = 250;
    double edge_prob = 0.025;
    std::uint64_t seed = 0;
    double noise_std = 2.0;
    bool stabilize = true;
    double target_radius = 0.95;
    double level_min = 2.0;
    double level_max = 4.0;
    double amp_min = 0.25;
    double amp_max = 0.5;
    double period = 250.0;
    /// Sinusoid phase per eigenfeature; missing entries default to r * pi / 4.
    std::vector<double> phases;

    void validate() const;
    double phase(Index r) const;
};

struct GroundTruth {
    SynthConfig config;
    RegressionSetting setting;
    /// N x MN eigennetworks, after stabilization scaling.
    std::vector<Matrix> eigennetworks;
    /// K x R eigenfeatures.
    Matrix weights;
    /// 0-based index of the last time point before each regime switch.
    std::vector<Index> changepoints;
    TimeSeriesPanel panel;
    /// Common factor applied to every A_k; 1 when no scaling was needed.
    double scale = 1.0;

    /// (m p) x R matrix whose columns are vec(B^(r)).
    Matrix eigennetwork_matrix() const;
    /// A_k = sum_r c_k^(r) B^(r) for every k.
    GraphSequence graphs() const;
};

std::vector<Matrix> gen_eigennetworks(const SynthConfig& cfg);

/// Changepoint i (1-based) is drawn uniformly among the 1-based time indices
/// in [(K-M)/(S+1) (i - 1/8), (K-M)/(S+1) (i + 1/8)); returned 0-based.
std::vector<Index> gen_changepoints(const SynthConfig& cfg);

/// c_k^(r) = level + amp sin(2 pi k / period + phase_r), with k 1-based; level
/// and amp are redrawn after every changepoint.
Matrix gen_weights(const SynthConfig& cfg, const std::vector<Index>& changepoints);

struct Simulation {
    TimeSeriesPanel panel;
    std::vector<Matrix> eigennetworks;
    double scale = 1.0;
};

/// Largest |eigenvalue| of the AR companion matrix of A = (A_1 ... A_M).
double companion_radius(const Matrix& A, Index lags);

Simulation simulate_ar(const std::vector<Matrix>& eigennetworks, const Matrix& weights,
                       const SynthConfig& cfg);

GroundTruth generate(const SynthConfig& cfg);

}  // namespace tvnet
