#include "oracles.hpp"

#include "tvnet/eval.hpp"

#include <doctest.h>

using namespace tvnet;

namespace {

Matrix sparse_network(std::mt19937_64& rng, const RegressionSetting& s, double density) {
    std::bernoulli_distribution keep(density);
    Matrix A = oracle::random_matrix(rng, s.rows(), s.cols());
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < s.nodes(); ++j) {
            const bool on = keep(rng);
            for (Index l = 0; l < s.lags(); ++l)
                if (!on) A(i, s.column(j, l)) = 0.0;
        }
    return A.cwiseProduct(s.mask());
}

}  // namespace

TEST_CASE("edge magnitudes are lag-group norms") {
    const auto s = RegressionSetting::directed_ar(2, 2);
    Matrix A = Matrix::Zero(2, 4);
    A(0, s.column(1, 0)) = 3.0;
    A(0, s.column(1, 1)) = 4.0;
    const Vector mags = edge_magnitudes(A, s);
    CHECK(mags.size() == 4);
    CHECK(mags.maxCoeff() == doctest::Approx(5.0));
    CHECK(mags.sum() == doctest::Approx(5.0));
}

TEST_CASE("roc end points") {
    std::mt19937_64 rng(1);
    const auto s = RegressionSetting::directed_ar(5, 2);
    const Matrix truth = sparse_network(rng, s, 0.3);
    const auto perfect = edge_roc(truth, truth, s, {1e-12});
    CHECK(perfect[0].p_fa == 0.0);
    CHECK(perfect[0].p_d == 1.0);
    const auto none = edge_roc(Matrix::Zero(5, 10), truth, s);
    for (const auto& p : none) {
        CHECK(p.p_fa == 0.0);
        CHECK(p.p_d == 0.0);
    }
    CHECK(roc_reaches(perfect, 0.0, 1.0));
    CHECK_FALSE(roc_reaches(none, 1.0, 0.1));
    CHECK_THROWS_AS(edge_roc(truth, Matrix::Zero(5, 10), s), ParameterError);
    CHECK_THROWS_AS(edge_roc(truth, Matrix::Zero(5, 9), s), ShapeError);
}

TEST_CASE("roc rates fall as the threshold rises") {
    std::mt19937_64 rng(2);
    const auto s = RegressionSetting::directed_ar(6, 2);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix truth = sparse_network(rng, s, 0.3);
        const Matrix est = truth + oracle::random_matrix(rng, 6, 12, 0.3).cwiseProduct(s.mask());
        const auto th = default_thresholds(est, s);
        CHECK(th.size() == 100);
        CHECK(th.front() == doctest::Approx(1e-4));
        CHECK(th.back() == doctest::Approx(edge_magnitudes(est, s).maxCoeff()));
        const auto roc = edge_roc(est, truth, s, th);
        for (std::size_t i = 0; i < roc.size(); ++i) {
            CHECK(roc[i].p_fa >= 0.0);
            CHECK(roc[i].p_d <= 1.0);
            if (i > 0) {
                CHECK(th[i] > th[i - 1]);
                CHECK(roc[i].p_fa <= roc[i - 1].p_fa);
                CHECK(roc[i].p_d <= roc[i - 1].p_d);
            }
        }
    }
    CHECK(default_thresholds(Matrix::Zero(6, 12), s) == std::vector<double>{1e-4});
}

TEST_CASE("roc counts by hand") {
    const auto s = RegressionSetting::directed_ar(2, 1);
    Matrix truth(2, 2), est(2, 2);
    truth << 1, 0, 1, 0;
    est << 0.5, 0.2, 0.05, 0.0;
    const auto roc = edge_roc(est, truth, s, {0.1, 0.3});
    CHECK(roc[0].p_d == doctest::Approx(0.5));
    CHECK(roc[0].p_fa == doctest::Approx(0.5));
    CHECK(roc[1].p_d == doctest::Approx(0.5));
    CHECK(roc[1].p_fa == doctest::Approx(0.0));
}

TEST_CASE("changepoint matching") {
    const auto same = changepoint_error({10, 50}, {10, 50}, 10);
    CHECK(same.misses == 0);
    CHECK(same.false_alarms == 0);
    CHECK(same.offsets == std::vector<Index>{0, 0});

    const auto empty = changepoint_error({}, {10, 50}, 10);
    CHECK(empty.misses == 2);
    CHECK(empty.false_alarms == 0);

    const auto shifted = changepoint_error({13}, {10}, 10);
    CHECK(shifted.misses == 0);
    CHECK(shifted.offsets == std::vector<Index>{3});

    const auto far = changepoint_error({30}, {10}, 10);
    CHECK(far.misses == 1);
    CHECK(far.false_alarms == 1);

    // closest pairs are matched first
    const auto greedy = changepoint_error({14, 18}, {17}, 10);
    CHECK(greedy.offsets == std::vector<Index>{1});
    CHECK(greedy.false_alarms == 1);
    CHECK_THROWS_AS(changepoint_error({1}, {1}, -1), ParameterError);
}

TEST_CASE("changepoint matching is symmetric") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<Index> pos(0, 100), count(0, 5);
    for (int trial = 0; trial < 200; ++trial) {
        auto draw = [&] {
            std::vector<Index> v;
            for (Index n = count(rng); n > 0; --n) v.push_back(pos(rng));
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        };
        const auto a = draw(), b = draw();
        const auto ab = changepoint_error(a, b, 8), ba = changepoint_error(b, a, 8);
        CHECK(ab.misses == ba.false_alarms);
        CHECK(ab.false_alarms == ba.misses);
        CHECK(ab.offsets.size() == ba.offsets.size());
        CHECK(static_cast<std::size_t>(ab.misses) + ab.offsets.size() == b.size());
    }
}

TEST_CASE("trajectory error") {
    std::mt19937_64 rng(4);
    const auto s = RegressionSetting::directed_ar(3, 2);
    GraphSequence a = GraphSequence::zeros(s, 12), b = a, c = a;
    a.Acal = oracle::random_matrix(rng, 12, s.size());
    b.Acal = oracle::random_matrix(rng, 12, s.size());
    c.Acal = oracle::random_matrix(rng, 12, s.size());

    const auto self = trajectory_error(a, a);
    CHECK(self.mean == 0.0);
    CHECK(std::isnan(self.per_k[0]));
    CHECK(std::isnan(self.per_k[1]));

    const auto zero = trajectory_error(GraphSequence::zeros(s, 12), a);
    for (Index k = 2; k < 12; ++k) CHECK(zero.per_k[k] == doctest::Approx(a.graph(k).norm()));

    const auto ab = trajectory_error(a, b), bc = trajectory_error(b, c), ac = trajectory_error(a, c);
    for (Index k = 2; k < 12; ++k) {
        CHECK(ab.per_k[k] > 0.0);
        CHECK(ac.per_k[k] <= ab.per_k[k] + bc.per_k[k] + 1e-12);
    }
    double sum = 0.0;
    for (Index k = 2; k < 12; ++k) sum += ab.per_k[k];
    CHECK(ab.mean == doctest::Approx(sum / 10));

    CHECK_THROWS_AS(trajectory_error(a, GraphSequence::zeros(s, 11)), ShapeError);
}

TEST_CASE("edge series") {
    const auto s = RegressionSetting::directed_ar(2, 2);
    GraphSequence seq = GraphSequence::zeros(s, 5);
    for (Index k = 0; k < 5; ++k) {
        Matrix A = Matrix::Zero(2, 4);
        A(0, s.column(1, 1)) = static_cast<double>(k);
        seq.set_graph(k, A);
    }
    const Vector v = edge_series(seq, 0, 1, 1);
    for (Index k = 0; k < 5; ++k) CHECK(v[k] == static_cast<double>(k));
    CHECK(edge_series(seq, 1, 0, 0).isZero());
    CHECK_THROWS_AS(edge_series(seq, 2, 0, 0), IndexError);
}
