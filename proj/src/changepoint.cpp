#include "tvnet/changepoint.hpp"

#include "tvnet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tvnet {

std::string_view to_string(DetectionStrategy strategy) {
    return strategy == DetectionStrategy::Fast ? "fast" : "exhaustive";
}

DetectionStrategy strategy_from_string(std::string_view text) {
    if (text == "fast") return DetectionStrategy::Fast;
    if (text == "exhaustive") return DetectionStrategy::Exhaustive;
    throw ParameterError("unknown detection strategy '" + std::string(text) + "'");
}

void ChangepointConfig::validate() const {
    if (!(bandwidth > 0) || !std::isfinite(bandwidth)) throw ParameterError("bandwidth must be positive");
    if (!(gamma >= 0)) throw ParameterError("gamma must be >= 0");
    if (min_window < 1) throw ParameterError("min_window must be at least 1");
}

double side_residual(const GraphSequence& est, const KernelWeights& weights, Index k,
                     const TimeSeriesPanel& panel, const LinkSpec& link) {
    if (!est.side || *est.side != weights.side)
        throw ConfigurationError("residual kernel side does not match the estimator's side");
    if (est.length() != weights.size()) throw ShapeError("estimate and kernel lengths differ");
    return objective_F(est.effective(k), est.slope(k), k, weights, est.setting, panel, link);
}

bool window_defined(const KernelWeights& weights, Index k, Index min_window) {
    Index count = 0;
    for (Index j = weights.first_index; j < weights.size(); ++j)
        if (weights.W(k, j) > 0.0) ++count;
    return count >= min_window;
}

std::vector<KernelSide> select_estimators(const Matrix& residuals, double gamma) {
    if (!(gamma >= 0)) throw ParameterError("gamma must be >= 0");
    if (residuals.rows() != 3) throw ShapeError("residual table must have three rows");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<KernelSide> out(static_cast<std::size_t>(residuals.cols()), KernelSide::Center);
    for (Index k = 0; k < residuals.cols(); ++k) {
        const double l = residuals(side_row(KernelSide::Left), k);
        const double c = residuals(side_row(KernelSide::Center), k);
        const double r = residuals(side_row(KernelSide::Right), k);
        if (std::isnan(l) || std::isnan(r)) continue;
        double best_c = nan;
        if (gamma == 0.0) best_c = 0.0;
        else if (!std::isnan(c) && !std::isinf(gamma)) best_c = gamma * c;
        KernelSide pick = KernelSide::Center;
        double best = best_c;
        if (std::isnan(best) || l < best) {
            pick = KernelSide::Left;
            best = l;
        }
        if (r < best) pick = KernelSide::Right;
        out[static_cast<std::size_t>(k)] = pick;
    }
    return out;
}

std::vector<Index> detect(const std::vector<KernelSide>& selection) {
    std::vector<Index> out;
    for (std::size_t k = 0; k + 1 < selection.size(); ++k)
        if (selection[k] == KernelSide::Left && selection[k + 1] == KernelSide::Right)
            out.push_back(static_cast<Index>(k));
    return out;
}

std::vector<Index> fast_candidates(const std::vector<KernelSide>& partial) { return detect(partial); }

namespace {

void copy_row(GraphSequence& dst, const GraphSequence& src, Index k) {
    dst.Acal.row(k) = src.Acal.row(k);
    dst.Aprime.row(k) = src.Aprime.row(k);
    if (src.Lcal) {
        if (!dst.Lcal) dst.Lcal = Matrix::Zero(dst.Acal.rows(), dst.Acal.cols());
        dst.Lcal->row(k) = src.Lcal->row(k);
    }
}

// Segment [begin, end] (inclusive) of k given sorted changepoints.
std::pair<Index, Index> segment_of(Index k, const std::vector<Index>& changepoints, Index first,
                                   Index last) {
    Index begin = first;
    Index end = last;
    for (Index c : changepoints) {
        if (c < k) begin = std::max(begin, c + 1);
        else {
            end = std::min(end, c);
            break;
        }
    }
    return {begin, end};
}

}  // namespace

std::vector<Index> smooth_boundaries(GraphSequence& estimate, const std::vector<Index>& changepoints,
                                     const TimeSeriesPanel& panel, const LinkSpec& link,
                                     const PenaltySpec& penalty, const KernelWeights& center,
                                     const FitOptions& options) {
    if (center.side != KernelSide::Center) throw ConfigurationError("boundary smoothing needs a centre kernel");
    const Index K = estimate.length();
    const Index first = estimate.first_defined();
    const auto radius = static_cast<Index>(std::ceil(center.bandwidth));

    std::vector<Index> times;
    for (Index c : changepoints)
        for (Index k = std::max(first, c + 1 - radius); k <= std::min(K - 1, c + radius); ++k) times.push_back(k);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    std::vector<LocalFit> fits(times.size());
    parallel_for(static_cast<Index>(times.size()), options.workers, [&](Index i) {
        const Index k = times[static_cast<std::size_t>(i)];
        const auto [begin, end] = segment_of(k, changepoints, first, K - 1);
        const Vector row = truncated_row(center, k, begin, end);
        fits[static_cast<std::size_t>(i)] = fit_local(row, k, center.bandwidth, estimate.setting, panel,
                                                      link, penalty, options);
    });
    for (std::size_t i = 0; i < times.size(); ++i) {
        estimate.set_graph(times[i], fits[i].A);
        estimate.set_slope(times[i], fits[i].Aprime);
        if (penalty.lambda_latent > 0.0) estimate.set_latent(times[i], fits[i].L);
    }
    return times;
}

ChangepointResult fit_with_changepoints(const TimeSeriesPanel& panel,
                                        const RegressionSetting& setting, const LinkSpec& link,
                                        const PenaltySpec& penalty, const ChangepointConfig& config,
                                        const FitOptions& options) {
    config.validate();
    options.validate();
    penalty.validate();
    check_compatible(setting, panel);

    const Index K = panel.length();
    const Index first = setting.first_time();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool gamma_inf = std::isinf(config.gamma);

    std::array<KernelWeights, 3> kernels;
    ChangepointResult result;
    for (KernelSide s : {KernelSide::Left, KernelSide::Center, KernelSide::Right}) {
        const auto i = static_cast<std::size_t>(side_row(s));
        kernels[i] = make_kernel(K, config.bandwidth, config.shape, s, first);
        result.sides[i] = GraphSequence::zeros(setting, K);
        result.sides[i].side = s;
    }
    Matrix residuals = Matrix::Constant(3, K, nan);
    std::vector<bool> fitted_center(static_cast<std::size_t>(K), false);

    auto fit_side = [&](KernelSide s, const std::vector<Index>& times) {
        if (times.empty()) return;
        const auto i = static_cast<std::size_t>(side_row(s));
        const GraphSequence seq = fit_tv_graphs(panel, setting, link, penalty, kernels[i], options,
                                                std::span<const Index>(times));
        for (Index k : times) copy_row(result.sides[i], seq, k);
        parallel_for(static_cast<Index>(times.size()), options.workers, [&](Index t) {
            const Index k = times[static_cast<std::size_t>(t)];
            residuals(side_row(s), k) = side_residual(result.sides[i], kernels[i], k, panel, link);
        });
        result.fit_counts[i] += static_cast<Index>(times.size());
        if (s == KernelSide::Center)
            for (Index k : times) fitted_center[static_cast<std::size_t>(k)] = true;
    };
    auto center_missing = [&](const std::vector<Index>& wanted) {
        std::vector<Index> out;
        for (Index k : wanted)
            if (!fitted_center[static_cast<std::size_t>(k)]) out.push_back(k);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    std::vector<Index> all_times, one_sided, forced;
    for (Index k = first; k < K; ++k) {
        all_times.push_back(k);
        const bool both = window_defined(kernels[0], k, config.min_window) &&
                          window_defined(kernels[2], k, config.min_window);
        (both ? one_sided : forced).push_back(k);
    }

    std::vector<KernelSide> selection(static_cast<std::size_t>(K), KernelSide::Center);
    if (config.gamma == 0.0) {
        fit_side(KernelSide::Center, all_times);
    } else {
        fit_side(KernelSide::Left, one_sided);
        fit_side(KernelSide::Right, one_sided);
        if (config.strategy == DetectionStrategy::Exhaustive) {
            fit_side(KernelSide::Center, gamma_inf ? forced : all_times);
            selection = select_estimators(residuals, config.gamma);
        } else {
            const std::vector<KernelSide> partial = select_estimators(residuals, config.gamma);
            const std::vector<Index> candidates = fast_candidates(partial);
            std::vector<Index> confirm = forced;
            if (!gamma_inf) {
                for (Index k : candidates) {
                    confirm.push_back(k);
                    confirm.push_back(k + 1);
                }
            }
            fit_side(KernelSide::Center, center_missing(confirm));
            const std::vector<KernelSide> full = select_estimators(residuals, config.gamma);
            if (gamma_inf) {
                selection = full;
            } else {
                for (Index k : candidates) {
                    selection[static_cast<std::size_t>(k)] = full[static_cast<std::size_t>(k)];
                    selection[static_cast<std::size_t>(k + 1)] = full[static_cast<std::size_t>(k + 1)];
                }
            }
        }
        // centre fits still missing where the centre was selected
        std::vector<Index> need;
        for (Index k : all_times)
            if (selection[static_cast<std::size_t>(k)] == KernelSide::Center) need.push_back(k);
        fit_side(KernelSide::Center, center_missing(need));
    }

    result.report.selection = selection;
    result.report.changepoints = detect(selection);
    result.report.gamma = config.gamma;
    result.report.residuals = std::move(residuals);

    result.estimate = GraphSequence::zeros(setting, K);
    if (penalty.lambda_latent > 0.0) result.estimate.Lcal = Matrix::Zero(K, setting.size());
    for (Index k : all_times)
        copy_row(result.estimate, result.sides[static_cast<std::size_t>(side_row(selection[static_cast<std::size_t>(k)]))], k);

    if (config.smooth_boundaries && !result.report.changepoints.empty()) {
        const auto refit = smooth_boundaries(result.estimate, result.report.changepoints, panel, link, penalty,
                                             kernels[1], options);
        result.fit_counts[1] += static_cast<Index>(refit.size());
    }
    return result;
}

}  // namespace tvnet
