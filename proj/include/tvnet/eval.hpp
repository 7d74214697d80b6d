#pragma once

// Metrics against ground truth: thresholded edge detection, changepoint
// localization and trajectory error.

#include "tvnet/tvgraph.hpp"

#include <vector>

namespace tvnet {

struct EdgeRocPoint {
    double threshold = 0.0;
    double p_fa = 0.0;
    double p_d = 0.0;
};

/// 100 log-spaced thresholds from 1e-4 to the largest edge magnitude of est,
/// in increasing order. A single 1e-4 threshold when est has no larger edge.
std::vector<double> default_thresholds(const Matrix& est, const RegressionSetting& setting);

/// Edge magnitudes per network group (lag groups; single entries when M = 1),
/// masked positions only.
Vector edge_magnitudes(const Matrix& A, const RegressionSetting& setting);

/// An edge is detected when its group norm exceeds the threshold and is
/// present when any of its true coefficients is nonzero.
std::vector<EdgeRocPoint> edge_roc(const Matrix& est, const Matrix& truth,
                                   const RegressionSetting& setting,
                                   const std::vector<double>& thresholds);
std::vector<EdgeRocPoint> edge_roc(const Matrix& est, const Matrix& truth,
                                   const RegressionSetting& setting);

/// Whether some point has p_fa <= max_fa and p_d >= min_d.
bool roc_reaches(const std::vector<EdgeRocPoint>& roc, double max_fa, double min_d);

struct ChangepointError {
    Index misses = 0;
    Index false_alarms = 0;
    /// detected - truth for every matched pair, ordered by true index.
    std::vector<Index> offsets;
};

/// Greedy matching of detections to true changepoints, closest pairs first,
/// within `window` steps.
ChangepointError changepoint_error(const std::vector<Index>& detected, const std::vector<Index>& truth,
                                   Index window);

struct TrajectoryError {
    /// ||est_k - true_k||_F on the mask; NaN before the first defined time.
    Vector per_k;
    /// Mean of per_k over defined times.
    double mean = 0.0;
};

TrajectoryError trajectory_error(const GraphSequence& est, const GraphSequence& truth);

/// Coefficient (target i <- source j, lag l) over time; l is 0 in the
/// undirected setting.
Vector edge_series(const GraphSequence& seq, Index i, Index j, Index lag);

}  // namespace tvnet
