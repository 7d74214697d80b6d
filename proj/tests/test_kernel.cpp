#include "tvnet/kernel.hpp"

#include <doctest.h>

#include <cmath>

using namespace tvnet;

TEST_CASE("kernel rows are normalized and peak at the centre") {
    const auto w = make_kernel(30, 10.0, KernelShape::Gaussian, KernelSide::Center);
    for (Index k = 0; k < 30; ++k) {
        CHECK(w.W.row(k).sum() == doctest::Approx(1.0));
        Index arg = 0;
        w.W.row(k).maxCoeff(&arg);
        CHECK(arg == k);
    }
    CHECK((w.W.array() >= 0).all());
}

TEST_CASE("gaussian profile ratio at one bandwidth") {
    const auto w = make_kernel(40, 10.0, KernelShape::Gaussian, KernelSide::Center);
    const Matrix raw = w.raw();
    CHECK(raw(15, 25) / raw(15, 15) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(kernel_profile(KernelShape::Gaussian, 10.0, 10.0) == doctest::Approx(0.60653065971).epsilon(1e-10));
}

TEST_CASE("side structure") {
    const Index K = 25;
    const auto c = make_kernel(K, 4.0, KernelShape::Gaussian, KernelSide::Center);
    const auto l = make_kernel(K, 4.0, KernelShape::Gaussian, KernelSide::Left);
    const auto r = make_kernel(K, 4.0, KernelShape::Gaussian, KernelSide::Right);
    const Matrix craw = c.raw(), lraw = l.raw(), rraw = r.raw();
    CHECK((craw - craw.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((lraw - rraw.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    for (Index k = 0; k < K; ++k)
        for (Index j = 0; j < K; ++j) {
            if (j < k) CHECK(r.W(k, j) == 0.0);
            if (j > k) CHECK(l.W(k, j) == 0.0);
        }
    CHECK(r.W(10, 9) == 0.0);
}

TEST_CASE("first_index removes leading columns") {
    const auto w = make_kernel(20, 3.0, KernelShape::Gaussian, KernelSide::Left, 2);
    CHECK(w.W.leftCols(2).isZero());
    CHECK(w.support(2) == 1);
    CHECK(w.support(5) == 4);
    CHECK(w.W.row(6).sum() == doctest::Approx(1.0));
}

TEST_CASE("epanechnikov has compact support") {
    const auto w = make_kernel(30, 5.0, KernelShape::Epanechnikov, KernelSide::Center);
    CHECK(w.W(15, 21) == 0.0);
    CHECK(w.W(15, 19) > 0.0);
}

TEST_CASE("truncated rows") {
    const auto c = make_kernel(30, 5.0, KernelShape::Gaussian, KernelSide::Center);
    const Vector row = truncated_row(c, 12, 10, 20);
    CHECK(row.sum() == doctest::Approx(1.0));
    CHECK(row.head(10).isZero());
    CHECK(row.tail(9).isZero());
    CHECK(row[13] / row[12] == doctest::Approx(c.W(12, 13) / c.W(12, 12)));
    CHECK_THROWS_AS(truncated_row(c, 5, 10, 20), IndexError);
}

TEST_CASE("kernel parameter errors") {
    CHECK_THROWS_AS(make_kernel(10, 0.0, KernelShape::Gaussian, KernelSide::Center), ParameterError);
    CHECK_THROWS_AS(make_kernel(10, -1.0, KernelShape::Gaussian, KernelSide::Center), ParameterError);
    CHECK_THROWS_AS(make_kernel(1, 1.0, KernelShape::Gaussian, KernelSide::Center), ParameterError);
    CHECK(side_from_string("centre") == KernelSide::Center);
    CHECK_THROWS_AS(side_from_string("middle"), ParameterError);
    CHECK(shape_from_string(to_string(KernelShape::Epanechnikov)) == KernelShape::Epanechnikov);
}
