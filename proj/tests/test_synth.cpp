#include "oracles.hpp"

#include "tvnet/synth.hpp"

#include <doctest.h>

#include <numbers>

using namespace tvnet;

namespace {

SynthConfig small(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.nodes = 6;
    cfg.length = 80;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("eigennetworks without edges are diagonal") {
    SynthConfig cfg = small(1);
    cfg.edge_prob = 0.0;
    for (const Matrix& B : gen_eigennetworks(cfg)) {
        Matrix off = B;
        for (Index i = 0; i < cfg.nodes; ++i) off(i, i) = 0.0;
        CHECK(off.isZero());
        for (Index i = 0; i < cfg.nodes; ++i) {
            CHECK(B(i, i) >= 1.0);
            CHECK(B(i, i) < 2.0);
        }
    }
}

TEST_CASE("edge density matches the edge probability") {
    SynthConfig cfg;
    double edges = 0.0, slots = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        cfg.seed = seed;
        for (const Matrix& B : gen_eigennetworks(cfg)) {
            for (Index l = 0; l < cfg.lags; ++l)
                for (Index i = 0; i < cfg.nodes; ++i)
                    for (Index j = 0; j < cfg.nodes; ++j) {
                        if (i == j) continue;
                        slots += 1;
                        edges += B(i, l * cfg.nodes + j) != 0.0;
                    }
            for (Index i = 0; i < cfg.nodes; ++i) {
                CHECK(B(i, i) >= 1.0);
                CHECK(B(i, i) < 2.0);
            }
        }
    }
    CHECK(std::abs(edges / slots - 0.025) <= 0.01);
}

TEST_CASE("changepoints fall in their interval") {
    for (Index S : {1, 2, 3}) {
        SynthConfig cfg;
        cfg.changepoints = S;
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            cfg.seed = seed;
            const auto cps = gen_changepoints(cfg);
            REQUIRE(cps.size() == static_cast<std::size_t>(S));
            const double spacing = static_cast<double>(cfg.length - cfg.lags) / static_cast<double>(S + 1);
            for (Index i = 1; i <= S; ++i) {
                const double t = static_cast<double>(cps[static_cast<std::size_t>(i - 1)] + 1);
                CHECK(t >= spacing * (static_cast<double>(i) - 0.125));
                CHECK(t < spacing * (static_cast<double>(i) + 0.125));
            }
        }
    }
}

TEST_CASE("eigenfeatures follow level plus sinusoid") {
    SynthConfig cfg;
    cfg.changepoints = 0;
    const Matrix C = gen_weights(cfg, {});
    for (Index r = 0; r < cfg.rank; ++r) {
        // recover level and amplitude from two samples, then check every row
        const double s1 = std::sin(2 * std::numbers::pi * 1 / cfg.period + cfg.phase(r));
        const double s2 = std::sin(2 * std::numbers::pi * 2 / cfg.period + cfg.phase(r));
        const double amp = (C(1, r) - C(0, r)) / (s2 - s1);
        const double level = C(0, r) - amp * s1;
        CHECK(level >= cfg.level_min);
        CHECK(level < cfg.level_max);
        CHECK(amp >= cfg.amp_min - 1e-9);
        CHECK(amp < cfg.amp_max + 1e-9);
        for (Index k = 0; k < cfg.length; ++k) {
            const double t = static_cast<double>(k + 1);
            CHECK(C(k, r) == doctest::Approx(level + amp * std::sin(2 * std::numbers::pi * t / cfg.period + cfg.phase(r))));
        }
    }
}

TEST_CASE("eigenfeatures are smooth away from changepoints and jump at them") {
    SynthConfig cfg;
    cfg.changepoints = 2;
    const double slope = cfg.amp_max * 2 * std::numbers::pi / cfg.period;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        cfg.seed = seed;
        const auto cps = gen_changepoints(cfg);
        const Matrix C = gen_weights(cfg, cps);
        for (Index k = 1; k < cfg.length; ++k) {
            const bool jump = std::find(cps.begin(), cps.end(), k - 1) != cps.end();
            for (Index r = 0; r < cfg.rank; ++r) {
                const double d = std::abs(C(k, r) - C(k - 1, r));
                if (!jump) CHECK(d <= slope * (1 + 1e-9));
            }
        }
        // the jump is the level change up to the amplitude redraw and one sinusoid step
        for (Index c : cps)
            for (Index r = 0; r < cfg.rank; ++r) {
                const double before = C(c, r), after = C(c + 1, r);
                const double t0 = static_cast<double>(c + 1), t1 = t0 + 1;
                const double s0 = std::sin(2 * std::numbers::pi * t0 / cfg.period + cfg.phase(r));
                const double s1 = std::sin(2 * std::numbers::pi * t1 / cfg.period + cfg.phase(r));
                // the level drawn before the switch, from the preceding row
                const double prev = C(c - 1, r);
                const double s_prev = std::sin(2 * std::numbers::pi * (t0 - 1) / cfg.period + cfg.phase(r));
                const double amp_before = (before - prev) / (s0 - s_prev);
                const double level_before = before - amp_before * s0;
                const double next = C(c + 2, r);
                const double s2 = std::sin(2 * std::numbers::pi * (t1 + 1) / cfg.period + cfg.phase(r));
                const double amp_after = (next - after) / (s2 - s1);
                const double level_after = after - amp_after * s1;
                const double bound = std::abs(level_after - level_before) - (cfg.amp_max - cfg.amp_min) - slope;
                CHECK(std::abs(after - before) >= bound - 1e-9);
            }
    }
}

TEST_CASE("zero networks give pure noise") {
    SynthConfig cfg = small(3);
    const std::vector<Matrix> zero(2, Matrix::Zero(cfg.nodes, cfg.nodes * cfg.lags));
    const Simulation sim = simulate_ar(zero, Matrix::Ones(cfg.length, 2), cfg);
    const Matrix& X = sim.panel.data();
    const Matrix tail = X.rightCols(cfg.length - cfg.lags);
    const double var = tail.squaredNorm() / static_cast<double>(tail.size());
    CHECK(var == doctest::Approx(cfg.noise_std * cfg.noise_std).epsilon(0.15));
    CHECK(sim.scale == 1.0);
}

TEST_CASE("noiseless simulation follows the recursion exactly") {
    SynthConfig cfg = small(4);
    cfg.noise_std = 0.0;
    const GroundTruth gt = generate(cfg);
    const GraphSequence truth = gt.graphs();
    for (Index k = cfg.lags; k < cfg.length; ++k)
        CHECK(offset_loss(truth.graph(k), k, gt.setting, gt.panel, LinkSpec::identity()) <= 1e-20);
}

TEST_CASE("the true graphs explain the data") {
    const GroundTruth gt = generate(SynthConfig{});
    const GraphSequence truth = gt.graphs();
    const Matrix zero = Matrix::Zero(gt.setting.rows(), gt.setting.cols());
    Index better = 0, total = 0;
    for (Index k = gt.setting.first_time(); k < gt.config.length; ++k, ++total)
        better += offset_loss(truth.graph(k), k, gt.setting, gt.panel, LinkSpec::identity()) <=
                  offset_loss(zero, k, gt.setting, gt.panel, LinkSpec::identity());
    CHECK(static_cast<double>(better) >= 0.95 * static_cast<double>(total));
}

TEST_CASE("stabilization bounds the companion radius") {
    const GroundTruth gt = generate(SynthConfig{});
    const GraphSequence truth = gt.graphs();
    CHECK(gt.scale <= 1.0);
    for (Index k = gt.setting.first_time(); k < gt.config.length; ++k)
        CHECK(companion_radius(truth.graph(k), gt.config.lags) <= gt.config.target_radius + 1e-9);
    // scalar AR(1): the companion matrix is the coefficient itself
    CHECK(companion_radius(Matrix::Constant(1, 1, -0.7), 1) == doctest::Approx(0.7));
    CHECK(gt.panel.data().allFinite());
}

TEST_CASE("unstabilized explosive dynamics are reported") {
    SynthConfig cfg = small(5);
    cfg.stabilize = false;
    CHECK_THROWS_AS(generate(cfg), NumericError);
}

TEST_CASE("generation is deterministic and factorized") {
    const SynthConfig cfg = small(6);
    const GroundTruth a = generate(cfg), b = generate(cfg);
    CHECK(a.panel.data() == b.panel.data());
    CHECK(a.weights == b.weights);
    CHECK(a.changepoints == b.changepoints);
    const GroundTruth c = generate(small(7));
    CHECK(a.panel.data() != c.panel.data());
    const GraphSequence g = a.graphs();
    CHECK(g.Acal == a.weights * a.eigennetwork_matrix().transpose());
    for (Index k = 0; k < cfg.length; ++k) {
        Matrix sum = Matrix::Zero(cfg.nodes, cfg.nodes * cfg.lags);
        for (Index r = 0; r < cfg.rank; ++r) sum += a.weights(k, r) * a.eigennetworks[static_cast<std::size_t>(r)];
        CHECK((g.graph(k) - sum).norm() <= 1e-12 * (1 + sum.norm()));
    }
}

TEST_CASE("generator validation") {
    SynthConfig cfg;
    cfg.edge_prob = 2.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = SynthConfig{};
    cfg.length = 2;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = SynthConfig{};
    CHECK_THROWS_AS(gen_weights(cfg, {5, 3}), ParameterError);
}
