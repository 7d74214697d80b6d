#pragma once

// Changepoint detection by competing left, centre and right local estimators.
// At each time the estimator with the smallest scaled in-sample residual wins
// (the centre residual is scaled by gamma); a changepoint is declared between
// k and k + 1 when the left estimator wins at k and the right one at k + 1.

#include "tvnet/tvgraph.hpp"

#include <array>
#include <vector>

namespace tvnet {

enum class DetectionStrategy {
    /// Fit all three estimators at every time point.
    Exhaustive,
    /// Fit one-sided estimators everywhere, then confirm left/right crossovers
    /// with centre fits at the two adjacent points only.
    Fast,
};

std::string_view to_string(DetectionStrategy strategy);
DetectionStrategy strategy_from_string(std::string_view text);

struct ChangepointConfig {
    double bandwidth = 10.0;
    KernelShape shape = KernelShape::Gaussian;
    /// Weight on the centre residual; 0 always picks the centre, infinity never.
    double gamma = 1.0;
    DetectionStrategy strategy = DetectionStrategy::Fast;
    /// Refit points within ceil(bandwidth) of a detected changepoint with a
    /// centre kernel truncated to their segment.
    bool smooth_boundaries = true;
    /// One-sided estimators need at least this many usable time points;
    /// otherwise the centre estimator is forced.
    Index min_window = 3;

    void validate() const;
};

/// Row index of each side in a 3 x K residual table.
constexpr Index side_row(KernelSide side) noexcept { return static_cast<Index>(side); }

struct ChangepointReport {
    /// Selected estimator per time point.
    std::vector<KernelSide> selection;
    /// 0-based k with selection[k] == Left and selection[k + 1] == Right.
    std::vector<Index> changepoints;
    double gamma = 1.0;
    /// 3 x K weighted residuals, rows ordered left, centre, right; NaN where
    /// an estimator was not fitted or is undefined.
    Matrix residuals;
};

struct ChangepointResult {
    /// Assembled estimate; rows before the first defined time are zero.
    GraphSequence estimate;
    ChangepointReport report;
    /// Per-side fits; rows that were never fitted stay zero.
    std::array<GraphSequence, 3> sides;
    /// Number of local problems solved per side, including boundary refits
    /// (counted under the centre).
    std::array<Index, 3> fit_counts{0, 0, 0};
};

/// Weighted in-sample residual of `est` at k, using the kernel it was fitted
/// with. The latent block, if any, is included.
double side_residual(const GraphSequence& est, const KernelWeights& weights, Index k,
                     const TimeSeriesPanel& panel, const LinkSpec& link);

/// Whether the kernel row at k has at least `min_window` usable time points.
bool window_defined(const KernelWeights& weights, Index k, Index min_window);

/// Per-time argmin of (eps_l, gamma eps_c, eps_r). A NaN one-sided residual
/// forces the centre; a NaN centre residual leaves a left/right comparison.
/// Ties prefer centre, then left, then right.
std::vector<KernelSide> select_estimators(const Matrix& residuals, double gamma);

/// {k : I_k = left and I_{k+1} = right}.
std::vector<Index> detect(const std::vector<KernelSide>& selection);

/// Crossovers of a left/right-only selection; a superset of the final set.
std::vector<Index> fast_candidates(const std::vector<KernelSide>& partial);

ChangepointResult fit_with_changepoints(const TimeSeriesPanel& panel,
                                        const RegressionSetting& setting, const LinkSpec& link,
                                        const PenaltySpec& penalty, const ChangepointConfig& config,
                                        const FitOptions& options);

/// Points within ceil(bandwidth) of each changepoint refitted with a centre
/// kernel truncated to their segment. Returns the refitted time indices.
std::vector<Index> smooth_boundaries(GraphSequence& estimate, const std::vector<Index>& changepoints,
                                     const TimeSeriesPanel& panel, const LinkSpec& link,
                                     const PenaltySpec& penalty, const KernelWeights& center,
                                     const FitOptions& options);

}  // namespace tvnet
