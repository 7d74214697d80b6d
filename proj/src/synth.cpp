#include "tvnet/synth.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace tvnet {

namespace {

// Independent, reproducible stream per generator stage.
std::mt19937_64 stream(std::uint64_t seed, std::uint32_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), id};
    return std::mt19937_64(seq);
}

enum StreamId : std::uint32_t { kNetworks = 1, kChangepoints = 2, kWeights = 3, kNoise = 4 };

}  // namespace

void SynthConfig::validate() const {
    if (nodes < 1) throw ParameterError("nodes must be positive");
    if (rank < 1) throw ParameterError("rank must be positive");
    if (changepoints < 0) throw ParameterError("changepoint count must be >= 0");
    if (lags < 1) throw ParameterError("lag order must be >= 1");
    if (length <= lags + 1) throw ParameterError("length must exceed lag order + 1");
    if (!(edge_prob >= 0 && edge_prob <= 1)) throw ParameterError("edge_prob must lie in [0, 1]");
    if (!(noise_std >= 0) || !std::isfinite(noise_std)) throw ParameterError("noise_std must be >= 0");
    if (!(target_radius > 0 && target_radius < 1)) throw ParameterError("target_radius must lie in (0, 1)");
    if (!(level_min <= level_max)) throw ParameterError("level range is empty");
    if (!(amp_min <= amp_max)) throw ParameterError("amplitude range is empty");
    if (!(period > 0)) throw ParameterError("period must be positive");
    if (changepoints > 0 && (length - lags) / (changepoints + 1) < 1)
        throw ParameterError("too many changepoints for the time window");
}

double SynthConfig::phase(Index r) const {
    if (r < static_cast<Index>(phases.size())) return phases[static_cast<std::size_t>(r)];
    return static_cast<double>(r) * std::numbers::pi / 4.0;
}

Matrix GroundTruth::eigennetwork_matrix() const {
    Matrix B(setting.size(), static_cast<Index>(eigennetworks.size()));
    for (std::size_t r = 0; r < eigennetworks.size(); ++r)
        B.col(static_cast<Index>(r)) = eigennetworks[r].reshaped();
    return B;
}

GraphSequence GroundTruth::graphs() const {
    GraphSequence seq = GraphSequence::zeros(setting, weights.rows());
    seq.Acal = weights * eigennetwork_matrix().transpose();
    return seq;
}

std::vector<Matrix> gen_eigennetworks(const SynthConfig& cfg) {
    cfg.validate();
    auto rng = stream(cfg.seed, kNetworks);
    std::bernoulli_distribution edge(cfg.edge_prob);
    std::normal_distribution<double> weight(0.0, 1.0);
    std::uniform_real_distribution<double> diag(1.0, 2.0);

    const Index N = cfg.nodes;
    std::vector<Matrix> nets;
    for (Index r = 0; r < cfg.rank; ++r) {
        Matrix B = Matrix::Zero(N, N * cfg.lags);
        for (Index l = 0; l < cfg.lags; ++l) {
            for (Index j = 0; j < N; ++j) {
                for (Index i = 0; i < N; ++i) {
                    if (i == j) continue;
                    // draw the weight unconditionally so the stream layout
                    // does not depend on edge_prob
                    const bool present = edge(rng);
                    const double w = weight(rng);
                    if (present) B(i, l * N + j) = w;
                }
            }
        }
        for (Index i = 0; i < N; ++i) B(i, i) = diag(rng);
        nets.push_back(std::move(B));
    }
    return nets;
}

std::vector<Index> gen_changepoints(const SynthConfig& cfg) {
    cfg.validate();
    auto rng = stream(cfg.seed, kChangepoints);
    const double spacing = static_cast<double>(cfg.length - cfg.lags) /
                           static_cast<double>(cfg.changepoints + 1);
    std::vector<Index> cps;
    for (Index i = 1; i <= cfg.changepoints; ++i) {
        const double lo = spacing * (static_cast<double>(i) - 0.125);
        const double hi = spacing * (static_cast<double>(i) + 0.125);
        // integers t with lo <= t < hi
        const auto first = static_cast<Index>(std::ceil(lo));
        auto last = static_cast<Index>(std::ceil(hi)) - 1;
        if (last < first) last = first;
        std::uniform_int_distribution<Index> pick(first, last);
        Index t = pick(rng);
        t = std::min<Index>(std::max<Index>(t, 1), cfg.length - 1);
        cps.push_back(t - 1);
    }
    return cps;
}

Matrix gen_weights(const SynthConfig& cfg, const std::vector<Index>& changepoints) {
    cfg.validate();
    for (std::size_t i = 0; i < changepoints.size(); ++i) {
        if (changepoints[i] < 0 || changepoints[i] >= cfg.length - 1)
            throw ParameterError("changepoint outside the time window");
        if (i > 0 && changepoints[i] <= changepoints[i - 1])
            throw ParameterError("changepoints must be strictly increasing");
    }
    auto rng = stream(cfg.seed, kWeights);
    std::uniform_real_distribution<double> level(cfg.level_min, cfg.level_max);
    std::uniform_real_distribution<double> amp(cfg.amp_min, cfg.amp_max);

    const Index K = cfg.length;
    const Index R = cfg.rank;
    Matrix C(K, R);
    Vector lv(R), av(R);
    auto redraw = [&] {
        for (Index r = 0; r < R; ++r) {
            lv[r] = cfg.level_min == cfg.level_max ? cfg.level_min : level(rng);
            av[r] = cfg.amp_min == cfg.amp_max ? cfg.amp_min : amp(rng);
        }
    };
    redraw();
    std::size_t next = 0;
    for (Index k = 0; k < K; ++k) {
        const double t = static_cast<double>(k + 1);
        for (Index r = 0; r < R; ++r)
            C(k, r) = lv[r] + av[r] * std::sin(2.0 * std::numbers::pi * t / cfg.period + cfg.phase(r));
        if (next < changepoints.size() && changepoints[next] == k) {
            redraw();
            ++next;
        }
    }
    return C;
}

double companion_radius(const Matrix& A, Index lags) {
    const Index N = A.rows();
    if (A.cols() != N * lags) throw ShapeError("AR coefficient block has wrong width");
    Matrix comp = Matrix::Zero(N * lags, N * lags);
    comp.topRows(N) = A;
    if (lags > 1) comp.bottomLeftCorner(N * (lags - 1), N * (lags - 1)).setIdentity();
    Eigen::EigenSolver<Matrix> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue computation failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Simulation simulate_ar(const std::vector<Matrix>& eigennetworks, const Matrix& weights,
                       const SynthConfig& cfg) {
    cfg.validate();
    const Index N = cfg.nodes;
    const Index M = cfg.lags;
    const Index K = cfg.length;
    if (static_cast<Index>(eigennetworks.size()) != weights.cols() || weights.rows() != K)
        throw ShapeError("eigenfeature matrix does not match eigennetworks / length");
    for (const auto& B : eigennetworks)
        if (B.rows() != N || B.cols() != N * M) throw ShapeError("eigennetwork must be N x MN");

    Simulation sim;
    sim.eigennetworks = eigennetworks;

    auto graph_at = [&](Index k) {
        Matrix A = Matrix::Zero(N, N * M);
        for (std::size_t r = 0; r < sim.eigennetworks.size(); ++r)
            A += weights(k, static_cast<Index>(r)) * sim.eigennetworks[r];
        return A;
    };

    if (cfg.stabilize) {
        std::vector<Matrix> graphs;
        for (Index k = M; k < K; ++k) graphs.push_back(graph_at(k));
        auto radius_at = [&](double s) {
            double radius = 0.0;
            for (const auto& A : graphs) radius = std::max(radius, companion_radius(s * A, M));
            return radius;
        };
        if (radius_at(1.0) > cfg.target_radius) {
            // largest common factor s with max_k rho(companion(s A_k)) <= target
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 40; ++it) {
                const double mid = 0.5 * (lo + hi);
                (radius_at(mid) <= cfg.target_radius ? lo : hi) = mid;
            }
            sim.scale = lo;
            for (auto& B : sim.eigennetworks) B *= sim.scale;
        }
    }

    auto rng = stream(cfg.seed, kNoise);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix X(N, K);
    for (Index k = 0; k < std::min(M, K); ++k)
        for (Index i = 0; i < N; ++i) X(i, k) = normal(rng);
    for (Index k = M; k < K; ++k) {
        const Matrix A = graph_at(k);
        Vector x = Vector::Zero(N);
        for (Index l = 0; l < M; ++l) x.noalias() += A.middleCols(l * N, N) * X.col(k - 1 - l);
        for (Index i = 0; i < N; ++i) x[i] += cfg.noise_std * normal(rng);
        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e8)
            throw NumericError("AR simulation exploded at time " + std::to_string(k + 1) +
                               "; enable stabilize");
        X.col(k) = x;
    }
    sim.panel = TimeSeriesPanel(std::move(X));
    return sim;
}

GroundTruth generate(const SynthConfig& cfg) {
    cfg.validate();
    GroundTruth gt;
    gt.config = cfg;
    gt.setting = RegressionSetting::directed_ar(cfg.nodes, cfg.lags);
    gt.changepoints = gen_changepoints(cfg);
    gt.weights = gen_weights(cfg, gt.changepoints);
    Simulation sim = simulate_ar(gen_eigennetworks(cfg), gt.weights, cfg);
    gt.eigennetworks = std::move(sim.eigennetworks);
    gt.panel = std::move(sim.panel);
    gt.scale = sim.scale;
    return gt;
}

}  // namespace tvnet
