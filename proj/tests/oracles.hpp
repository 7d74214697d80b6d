#pragma once

// Independent reference computations for the tests. Nothing here calls the
// solver or prox code it is used to check.

#include "tvnet/glm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using tvnet::Index;
using tvnet::Matrix;
using tvnet::Vector;

/// Central differences of a scalar function of a matrix, entry by entry.
inline Matrix central_difference(const std::function<double(const Matrix&)>& f, const Matrix& X,
                                 double eps = 1e-6) {
    Matrix G(X.rows(), X.cols());
    Matrix P = X;
    for (Index j = 0; j < X.cols(); ++j)
        for (Index i = 0; i < X.rows(); ++i) {
            const double x = X(i, j);
            P(i, j) = x + eps;
            const double up = f(P);
            P(i, j) = x - eps;
            const double down = f(P);
            P(i, j) = x;
            G(i, j) = (up - down) / (2 * eps);
        }
    return G;
}

inline double relative_error(const Matrix& a, const Matrix& b) {
    const double scale = std::max({a.norm(), b.norm(), 1e-12});
    return (a - b).norm() / scale;
}

/// argmin_a 1/2 ||a - y||^2 + t ||a||_2 by a zooming grid search over a box
/// around y. The objective is convex, so shrinking the box around the best
/// grid point converges to the minimizer.
inline Vector grid_group_prox(const Vector& y, double t, double tol = 1e-9) {
    const Index d = y.size();
    auto objective = [&](const Vector& a) { return 0.5 * (a - y).squaredNorm() + t * a.norm(); };
    const int points = d <= 2 ? 41 : 13;
    Vector center = y;
    double half = std::max(1.0, 1.5 * y.norm());
    Vector best = center;
    double best_value = objective(center);
    {
        const Vector zero = Vector::Zero(d);
        if (objective(zero) < best_value) {
            best = zero;
            best_value = objective(zero);
        }
    }
    while (half > tol) {
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        while (true) {
            Vector a(d);
            for (Index c = 0; c < d; ++c)
                a[c] = center[c] - half + 2 * half * idx[static_cast<std::size_t>(c)] / (points - 1);
            const double v = objective(a);
            if (v < best_value) {
                best_value = v;
                best = a;
            }
            Index c = 0;
            for (; c < d; ++c) {
                if (++idx[static_cast<std::size_t>(c)] < points) break;
                idx[static_cast<std::size_t>(c)] = 0;
            }
            if (c == d) break;
        }
        center = best;
        half *= 4.0 / (points - 1);
    }
    // The minimizer may be exactly zero; the grid can only get within tol of it.
    if (objective(Vector::Zero(d)) <= best_value) return Vector::Zero(d);
    return best;
}

/// Weighted least squares per row under a mask: for each row i, solve the
/// normal equations over the columns where mask(i, :) == 1.
inline Matrix masked_wls(const std::vector<Vector>& ys, const std::vector<Vector>& xs, const Vector& w,
                         const Matrix& mask) {
    const Index m = mask.rows(), p = mask.cols();
    Matrix A = Matrix::Zero(m, p);
    for (Index i = 0; i < m; ++i) {
        std::vector<Index> cols;
        for (Index c = 0; c < p; ++c)
            if (mask(i, c) != 0.0) cols.push_back(c);
        const Index q = static_cast<Index>(cols.size());
        if (q == 0) continue;
        Matrix G = Matrix::Zero(q, q);
        Vector b = Vector::Zero(q);
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const double wj = w[static_cast<Index>(j)];
            if (wj == 0.0) continue;
            Vector xr(q);
            for (Index a = 0; a < q; ++a) xr[a] = xs[j][cols[static_cast<std::size_t>(a)]];
            G += wj * xr * xr.transpose();
            b += wj * ys[j][i] * xr;
        }
        const Vector sol = G.fullPivLu().solve(b);
        for (Index a = 0; a < q; ++a) A(i, cols[static_cast<std::size_t>(a)]) = sol[a];
    }
    return A;
}

/// Best total of S(perm[r], r) over every permutation.
inline double best_assignment(const Matrix& S) {
    const Index R = S.cols();
    std::vector<Index> perm(static_cast<std::size_t>(R));
    std::iota(perm.begin(), perm.end(), Index{0});
    double best = -std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (Index r = 0; r < R; ++r) total += S(perm[static_cast<std::size_t>(r)], r);
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    return Matrix::NullaryExpr(rows, cols, [&] { return n(rng); });
}

}  // namespace oracle
