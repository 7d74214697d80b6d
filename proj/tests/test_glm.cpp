#include "oracles.hpp"

#include "tvnet/glm.hpp"

#include <doctest.h>

using namespace tvnet;

TEST_CASE("link potentials are consistent") {
    for (const LinkSpec& link : {LinkSpec::identity(), LinkSpec::logistic()}) {
        double prev = -std::numeric_limits<double>::infinity();
        for (double v = -10.0; v <= 10.0; v += 0.25) {
            const double eps = 1e-5;
            const double fd = (link.G(v + eps) - link.G(v - eps)) / (2 * eps);
            CHECK(std::abs(link.g(v) - fd) <= 1e-5);
            CHECK(link.g(v) >= prev);
            prev = link.g(v);
        }
    }
    const LinkSpec id = LinkSpec::identity();
    CHECK(id.G(3.0) == doctest::Approx(4.5));
    CHECK(id.G_star(-2.0) == doctest::Approx(2.0));
    CHECK(LinkSpec::from_name("logistic").name == "logistic");
    CHECK_THROWS_AS(LinkSpec::from_name("probit"), ParameterError);
}

TEST_CASE("regression settings") {
    const auto ar = RegressionSetting::directed_ar(4, 3);
    CHECK(ar.rows() == 4);
    CHECK(ar.cols() == 12);
    CHECK(ar.mask().isOnes());
    CHECK(ar.first_time() == 3);
    CHECK(ar.column(1, 2) == 9);

    const auto un = RegressionSetting::undirected(3);
    CHECK(un.rows() == 3);
    CHECK(un.cols() == 3);
    CHECK(un.mask().diagonal().isZero());
    CHECK(un.mask().sum() == 6.0);

    Matrix bad = Matrix::Ones(3, 3);
    CHECK_THROWS_AS(un.with_mask(bad), ParameterError);
    Matrix nonbinary = Matrix::Ones(4, 12);
    nonbinary(0, 0) = 0.5;
    CHECK_THROWS_AS(ar.with_mask(nonbinary), ParameterError);
    CHECK_THROWS_AS(ar.with_mask(Matrix::Ones(4, 4)), ShapeError);
}

TEST_CASE("design vectors") {
    SUBCASE("AR stacks lags newest first") {
        Matrix X(2, 3);
        X << 1, 2, 3, 4, 5, 6;
        const TimeSeriesPanel panel(X);
        const auto s = RegressionSetting::directed_ar(2, 2);
        const Design d = build_design(s, panel, 2);
        CHECK(d.y == Vector(X.col(2)));
        Vector x(4);
        x << 2, 5, 1, 4;
        CHECK(d.x == x);
        CHECK_THROWS_AS(build_design(s, panel, 1), IndexError);
        CHECK_THROWS_AS(build_design(s, panel, 3), IndexError);
    }
    SUBCASE("AR with one lag") {
        Matrix X(2, 2);
        X << 1, 2, 3, 4;
        const Design d = build_design(RegressionSetting::directed_ar(2, 1), TimeSeriesPanel(X), 1);
        CHECK(d.y == Eigen::Vector2d(2, 4).eval());
        CHECK(d.x == Eigen::Vector2d(1, 3).eval());
    }
    SUBCASE("undirected uses the same column") {
        Matrix X = Matrix::Random(3, 5);
        const Design d = build_design(RegressionSetting::undirected(3), TimeSeriesPanel(X), 0);
        CHECK(d.y == Vector(X.col(0)));
        CHECK(d.x == d.y);
    }
}

TEST_CASE("panel validation") {
    Matrix X = Matrix::Zero(2, 3);
    X(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(TimeSeriesPanel{X}, ParameterError);
    const auto s = RegressionSetting::directed_ar(2, 3);
    CHECK_THROWS_AS(check_compatible(s, TimeSeriesPanel(Matrix::Zero(2, 3))), ParameterError);
    CHECK_THROWS_AS(check_compatible(s, TimeSeriesPanel(Matrix::Zero(3, 10))), ShapeError);
}

TEST_CASE("offset loss") {
    SUBCASE("hand values") {
        Matrix X(1, 2);
        X << 1.0, 3.0;
        const TimeSeriesPanel panel(X);
        const auto s = RegressionSetting::directed_ar(1, 1);
        Matrix A(1, 1);
        A << 1.0;  // theta = 1, y = 3
        CHECK(offset_loss(A, 1, s, panel, LinkSpec::identity()) == doctest::Approx(2.0));
        CHECK(offset_loss(Matrix::Zero(1, 1), 1, s, panel, LinkSpec::identity()) == doctest::Approx(4.5));
        A << 3.0;
        CHECK(offset_loss(A, 1, s, panel, LinkSpec::identity()) == doctest::Approx(0.0));
        CHECK(residual(A, 1, s, panel, LinkSpec::identity()).isZero());
        CHECK(residual(Matrix::Zero(1, 1), 1, s, panel, LinkSpec::identity())[0] == -3.0);
    }
    SUBCASE("identity loss is half the mean squared error") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const auto s = RegressionSetting::directed_ar(5, 2);
            const TimeSeriesPanel panel(oracle::random_matrix(rng, 5, 8));
            const Matrix A = oracle::random_matrix(rng, 5, 10);
            const Design d = build_design(s, panel, 4);
            const double direct = (d.y - A * d.x).squaredNorm() / (2.0 * 5);
            CHECK(offset_loss(A, 4, s, panel, LinkSpec::identity()) == doctest::Approx(direct).epsilon(1e-12));
            CHECK(offset_loss(A, 4, s, panel, LinkSpec::identity()) >= 0.0);
        }
    }
    SUBCASE("gradient against central differences") {
        std::mt19937_64 rng(11);
        for (const LinkSpec& link : {LinkSpec::identity(), LinkSpec::logistic()}) {
            for (int trial = 0; trial < 10; ++trial) {
                const auto s = RegressionSetting::directed_ar(5, 2);
                Matrix X = oracle::random_matrix(rng, 5, 6);
                if (link.name == "logistic") X = (X.array() > 0).cast<double>();
                const TimeSeriesPanel panel(X);
                const Matrix A = oracle::random_matrix(rng, 5, 10, 0.3);
                const Matrix g = offset_loss_gradient(A, 3, s, panel, link);
                const Matrix fd = oracle::central_difference(
                    [&](const Matrix& B) { return offset_loss(B, 3, s, panel, link); }, A);
                CHECK(oracle::relative_error(g, fd) <= 1e-5);
            }
        }
    }
    SUBCASE("residual is the scaled theta-gradient") {
        std::mt19937_64 rng(13);
        const auto s = RegressionSetting::undirected(4);
        const TimeSeriesPanel panel((oracle::random_matrix(rng, 4, 3).array() > 0).cast<double>().matrix());
        const Matrix A = oracle::random_matrix(rng, 4, 4).cwiseProduct(s.mask());
        const Design d = build_design(s, panel, 1);
        const LinkSpec link = LinkSpec::logistic();
        const Vector r = residual(A, 1, s, panel, link);
        const Vector theta = A * d.x;
        for (Index i = 0; i < 4; ++i) {
            Vector up = theta, down = theta;
            up[i] += 1e-6;
            down[i] -= 1e-6;
            const double fd = (bregman_loss(up, d.y, link) - bregman_loss(down, d.y, link)) / 2e-6;
            CHECK(4 * fd == doctest::Approx(r[i]).epsilon(1e-6));
        }
    }
    SUBCASE("gradient respects the mask") {
        const auto s = RegressionSetting::undirected(3);
        std::mt19937_64 rng(5);
        const TimeSeriesPanel panel(oracle::random_matrix(rng, 3, 4));
        const Matrix g = offset_loss_gradient(Matrix::Zero(3, 3), 2, s, panel, LinkSpec::identity());
        CHECK(g.diagonal().isZero());
    }
}

TEST_CASE("logistic loss overflow is reported") {
    Matrix X(1, 2);
    X << 1e300, 1.0;
    const auto s = RegressionSetting::directed_ar(1, 1);
    Matrix A(1, 1);
    A << 1e300;
    CHECK_THROWS_AS(offset_loss(A, 1, s, TimeSeriesPanel(X), LinkSpec::logistic()), NumericError);
}
