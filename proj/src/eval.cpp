#include "tvnet/eval.hpp"

#include "tvnet/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace tvnet {

Vector edge_magnitudes(const Matrix& A, const RegressionSetting& setting) {
    if (A.rows() != setting.rows() || A.cols() != setting.cols())
        throw ShapeError("network shape does not match setting");
    const GroupStructure gs = lag_groups(setting);
    Vector out(static_cast<Index>(gs.groups.size()));
    const auto values = A.reshaped();
    for (std::size_t g = 0; g < gs.groups.size(); ++g) {
        double sq = 0.0;
        for (Index idx : gs.groups[g]) sq += values[idx] * values[idx];
        out[static_cast<Index>(g)] = std::sqrt(sq);
    }
    return out;
}

std::vector<double> default_thresholds(const Matrix& est, const RegressionSetting& setting) {
    const Vector mags = edge_magnitudes(est, setting);
    const double hi = mags.size() > 0 ? mags.maxCoeff() : 0.0;
    const double lo = 1e-4;
    if (!(hi > lo)) return {lo};
    std::vector<double> out(100);
    const double step = std::log(hi / lo) / 99.0;
    for (int i = 0; i < 100; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    out.back() = hi;
    return out;
}

std::vector<EdgeRocPoint> edge_roc(const Matrix& est, const Matrix& truth,
                                   const RegressionSetting& setting,
                                   const std::vector<double>& thresholds) {
    if (est.rows() != truth.rows() || est.cols() != truth.cols())
        throw ShapeError("estimated and true networks differ in shape");
    const Vector e = edge_magnitudes(est, setting);
    const Vector t = edge_magnitudes(truth, setting);
    const auto positives = (t.array() != 0.0).count();
    const auto negatives = t.size() - positives;
    if (positives == 0) throw ParameterError("true network has no edges; detection rate undefined");

    std::vector<EdgeRocPoint> roc;
    roc.reserve(thresholds.size());
    for (double th : thresholds) {
        Index hits = 0, alarms = 0;
        for (Index g = 0; g < e.size(); ++g) {
            if (!(e[g] > th)) continue;
            (t[g] != 0.0 ? hits : alarms) += 1;
        }
        EdgeRocPoint p;
        p.threshold = th;
        p.p_d = static_cast<double>(hits) / static_cast<double>(positives);
        p.p_fa = negatives > 0 ? static_cast<double>(alarms) / static_cast<double>(negatives) : 0.0;
        roc.push_back(p);
    }
    return roc;
}

std::vector<EdgeRocPoint> edge_roc(const Matrix& est, const Matrix& truth,
                                   const RegressionSetting& setting) {
    return edge_roc(est, truth, setting, default_thresholds(est, setting));
}

bool roc_reaches(const std::vector<EdgeRocPoint>& roc, double max_fa, double min_d) {
    return std::any_of(roc.begin(), roc.end(),
                       [&](const EdgeRocPoint& p) { return p.p_fa <= max_fa && p.p_d >= min_d; });
}

ChangepointError changepoint_error(const std::vector<Index>& detected, const std::vector<Index>& truth,
                                   Index window) {
    if (window < 0) throw ParameterError("matching window must be >= 0");
    // candidate pairs ordered by distance, then position
    std::vector<std::tuple<Index, Index, std::size_t, std::size_t>> pairs;
    for (std::size_t d = 0; d < detected.size(); ++d) {
        for (std::size_t t = 0; t < truth.size(); ++t) {
            const Index dist = std::abs(detected[d] - truth[t]);
            if (dist <= window) pairs.emplace_back(dist, detected[d] + truth[t], d, t);
        }
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<bool> used_d(detected.size(), false), used_t(truth.size(), false);
    std::vector<std::pair<Index, Index>> matches;
    for (const auto& [dist, sum, d, t] : pairs) {
        if (used_d[d] || used_t[t]) continue;
        used_d[d] = used_t[t] = true;
        matches.emplace_back(truth[t], detected[d] - truth[t]);
    }
    std::sort(matches.begin(), matches.end());

    ChangepointError err;
    err.misses = static_cast<Index>(std::count(used_t.begin(), used_t.end(), false));
    err.false_alarms = static_cast<Index>(std::count(used_d.begin(), used_d.end(), false));
    for (const auto& m : matches) err.offsets.push_back(m.second);
    return err;
}

TrajectoryError trajectory_error(const GraphSequence& est, const GraphSequence& truth) {
    if (est.Acal.rows() != truth.Acal.rows() || est.Acal.cols() != truth.Acal.cols())
        throw ShapeError("graph sequences differ in shape");
    if (!(est.setting.mask() == truth.setting.mask())) throw ShapeError("graph sequences use different masks");
    const Vector mask = est.setting.mask().reshaped();
    const Index K = est.length();
    const Index first = est.first_defined();

    TrajectoryError err;
    err.per_k = Vector::Constant(K, std::numeric_limits<double>::quiet_NaN());
    double total = 0.0;
    for (Index k = first; k < K; ++k) {
        const Vector diff = (est.Acal.row(k) - truth.Acal.row(k)).transpose().cwiseProduct(mask);
        err.per_k[k] = diff.norm();
        total += err.per_k[k];
    }
    err.mean = K > first ? total / static_cast<double>(K - first) : 0.0;
    return err;
}

Vector edge_series(const GraphSequence& seq, Index i, Index j, Index lag) {
    const RegressionSetting& s = seq.setting;
    if (i < 0 || i >= s.rows() || j < 0 || j >= s.nodes() || lag < 0 || lag >= s.lags())
        throw IndexError("edge index out of range");
    const Index idx = s.column(j, lag) * s.rows() + i;
    return seq.Acal.col(idx);
}

}  // namespace tvnet
