#include "tvnet/pna.hpp"

#include "tvnet/prox.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace tvnet {

std::string_view to_string(PnaInit init) { return init == PnaInit::Svd ? "svd" : "random"; }

PnaInit init_from_string(std::string_view text) {
    if (text == "svd") return PnaInit::Svd;
    if (text == "random") return PnaInit::Random;
    throw ParameterError("unknown factorization init '" + std::string(text) + "'");
}

void IpalmConfig::validate() const {
    if (t_max < 1) throw ParameterError("t_max must be at least 1");
    if (!(delta > 0)) throw ParameterError("tolerance delta must be positive");
}

Matrix Factorization::eigennetwork(Index r, const RegressionSetting& setting) const {
    if (r < 0 || r >= rank()) throw IndexError("eigennetwork index out of range");
    if (Bcal.rows() != setting.size()) throw ShapeError("eigennetwork length does not match setting");
    return Bcal.col(r).reshaped(setting.rows(), setting.cols());
}

namespace {

void check_shapes(const Matrix& C, const Matrix& Bcal, const Matrix& Ahat) {
    if (C.rows() != Ahat.rows() || Bcal.rows() != Ahat.cols() || C.cols() != Bcal.cols())
        throw ShapeError("factor shapes do not match the stacked graphs");
}

double factor_penalty(const Matrix& Bcal, const GroupStructure& groups) {
    double total = 0.0;
    for (Index r = 0; r < Bcal.cols(); ++r) total += group_norm_sum(Bcal.col(r), groups);
    return total;
}

}  // namespace

double mf_objective(const Matrix& C, const Matrix& Bcal, const Matrix& Ahat, double lambda_star,
                    double lambda_1, const RegressionSetting& setting) {
    check_shapes(C, Bcal, Ahat);
    if (Bcal.rows() != setting.size()) throw ShapeError("eigennetwork length does not match setting");
    const double data = 0.5 * (Ahat - C * Bcal.transpose()).squaredNorm();
    const double ridge = 0.5 * lambda_star * (C.squaredNorm() + Bcal.squaredNorm());
    const double sparse = lambda_1 == 0.0 ? 0.0 : lambda_1 * factor_penalty(Bcal, network_groups(setting));
    return data + ridge + sparse;
}

MfGradients mf_gradients(const Matrix& C, const Matrix& Bcal, const Matrix& Ahat, double lambda_star) {
    check_shapes(C, Bcal, Ahat);
    const Matrix Q = C * Bcal.transpose() - Ahat;
    return {Q.transpose() * C + lambda_star * Bcal, Q * Bcal + lambda_star * C};
}

LipschitzBounds lipschitz_bounds(const Matrix& C, const Matrix& Bcal, double lambda_star) {
    return {C.squaredNorm() + lambda_star, Bcal.squaredNorm() + lambda_star};
}

Matrix prox_B(const Matrix& Bcal, double t, const RegressionSetting& setting) {
    if (!(t >= 0) || !std::isfinite(t)) throw ParameterError("threshold must be finite and >= 0");
    if (Bcal.rows() != setting.size()) throw ShapeError("eigennetwork length does not match setting");
    const GroupStructure groups = network_groups(setting);
    Matrix out = Bcal;
    for (Index r = 0; r < out.cols(); ++r) shrink_groups(out.col(r), groups, t);
    return out;
}

Factorization svd_init(const Matrix& Ahat, const RegressionSetting& setting, Index R) {
    Eigen::BDCSVD<Matrix> svd(Ahat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericError("SVD of the stacked graphs failed");
    const Vector root = svd.singularValues().head(R).cwiseSqrt();
    Factorization f;
    f.C = svd.matrixU().leftCols(R) * root.asDiagonal();
    f.Bcal = svd.matrixV().leftCols(R) * root.asDiagonal();
    const Vector mask = setting.mask().reshaped();
    f.Bcal = f.Bcal.array().colwise() * mask.array();
    return f;
}

Factorization ipalm_factorize(const Matrix& Ahat, const RegressionSetting& setting, Index R,
                              double lambda_star, double lambda_1, const IpalmConfig& config) {
    config.validate();
    if (Ahat.cols() != setting.size()) throw ShapeError("stacked graphs do not match the setting");
    if (!Ahat.allFinite()) throw NumericError("stacked graphs contain non-finite values");
    if (R < 1 || R > std::min(Ahat.rows(), Ahat.cols()))
        throw ParameterError("rank must lie in [1, min(K, m p)]");
    if (!(lambda_star >= 0) || !(lambda_1 >= 0)) throw ParameterError("regularization weights must be >= 0");

    Factorization f;
    if (config.init == PnaInit::Svd) {
        f = svd_init(Ahat, setting, R);
    } else {
        std::mt19937_64 rng(config.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        f.C = Matrix::NullaryExpr(Ahat.rows(), R, [&] { return unit(rng); });
        f.Bcal = Matrix::NullaryExpr(Ahat.cols(), R, [&] { return unit(rng); });
        const Vector mask = setting.mask().reshaped();
        f.Bcal = f.Bcal.array().colwise() * mask.array();
    }
    f.lambda_star = lambda_star;
    f.lambda_1 = lambda_1;

    const GroupStructure groups = network_groups(setting);
    auto objective = [&](const Matrix& C, const Matrix& B) {
        const double data = 0.5 * (Ahat - C * B.transpose()).squaredNorm();
        return data + 0.5 * lambda_star * (C.squaredNorm() + B.squaredNorm()) +
               (lambda_1 == 0.0 ? 0.0 : lambda_1 * factor_penalty(B, groups));
    };

    Matrix B = f.Bcal, C = f.C;
    Matrix B_prev = B, C_prev = C;
    f.history.push_back(objective(C, B));

    Index t = 0;
    for (; t < config.t_max; ++t) {
        const double zeta = static_cast<double>(t) / static_cast<double>(t + 3);

        const Matrix Y = B + zeta * (B - B_prev);
        const double Lb = std::max(C.squaredNorm() + lambda_star, 1e-8);
        const Matrix Gb = (C * Y.transpose() - Ahat).transpose() * C + lambda_star * Y;
        Matrix B_next = Y - Gb / Lb;
        for (Index r = 0; r < R; ++r) shrink_groups(B_next.col(r), groups, lambda_1 / Lb);

        const Matrix Z = C + zeta * (C - C_prev);
        const double Lc = std::max(B_next.squaredNorm() + lambda_star, 1e-8);
        const Matrix Gc = (Z * B_next.transpose() - Ahat) * B_next + lambda_star * Z;
        Matrix C_next = Z - Gc / Lc;

        const double change = std::sqrt((B_next - B).squaredNorm() + (C_next - C).squaredNorm());
        const double size = std::sqrt(B.squaredNorm() + C.squaredNorm());
        B_prev = std::move(B);
        C_prev = std::move(C);
        B = std::move(B_next);
        C = std::move(C_next);

        const double value = objective(C, B);
        f.history.push_back(value);
        if (!std::isfinite(value))
            throw NonConvergenceError("factorization diverged at iteration " + std::to_string(t + 1), -1);

        const double eps = size > 0.0 ? change / size : change;
        if (eps < config.delta) {
            f.converged = true;
            ++t;
            break;
        }
    }
    f.C = std::move(C);
    f.Bcal = std::move(B);
    f.iterations = t;
    return f;
}

double stationarity_residual(const Factorization& f, const Matrix& Ahat, const RegressionSetting& setting) {
    const MfGradients g = mf_gradients(f.C, f.Bcal, Ahat, f.lambda_star);
    const LipschitzBounds L = lipschitz_bounds(f.C, f.Bcal, f.lambda_star);
    const double Lb = std::max(L.Lb, 1e-8);
    const double Lc = std::max(L.Lc, 1e-8);
    const Matrix step_B = f.Bcal - prox_B(f.Bcal - g.dB / Lb, f.lambda_1 / Lb, setting);
    const Matrix step_C = g.dC / Lc;
    return std::sqrt(step_B.squaredNorm() + step_C.squaredNorm());
}

Vector scree(const Matrix& Ahat) {
    Eigen::BDCSVD<Matrix> svd(Ahat);
    if (svd.info() != Eigen::Success) throw NumericError("SVD of the stacked graphs failed");
    return svd.singularValues();
}

Matrix eigennetwork_similarity(const Matrix& est_B, const Matrix& ref_B) {
    if (est_B.rows() != ref_B.rows()) throw ShapeError("eigennetwork lengths differ");
    Matrix S(est_B.cols(), ref_B.cols());
    for (Index e = 0; e < est_B.cols(); ++e) {
        for (Index r = 0; r < ref_B.cols(); ++r) {
            const double denom = est_B.col(e).norm() * ref_B.col(r).norm();
            S(e, r) = denom > 0.0 ? std::abs(est_B.col(e).dot(ref_B.col(r))) / denom : 0.0;
        }
    }
    return S;
}

Alignment align_factors(const Matrix& est_B, const Matrix& ref_B) {
    if (est_B.cols() != ref_B.cols()) throw ParameterError("factorizations have different ranks");
    const Index R = ref_B.cols();
    const Matrix S = eigennetwork_similarity(est_B, ref_B);

    std::vector<Index> perm(static_cast<std::size_t>(R));
    std::iota(perm.begin(), perm.end(), Index{0});
    if (R <= 8) {
        std::vector<Index> trial = perm;
        double best = -1.0;
        do {
            double total = 0.0;
            for (Index r = 0; r < R; ++r) total += S(trial[static_cast<std::size_t>(r)], r);
            // strict improvement keeps the lexicographically first optimum
            if (total > best + 1e-12) {
                best = total;
                perm = trial;
            }
        } while (std::next_permutation(trial.begin(), trial.end()));
    } else {
        std::vector<bool> used_e(static_cast<std::size_t>(R), false), used_r(static_cast<std::size_t>(R), false);
        for (Index step = 0; step < R; ++step) {
            Index be = -1, br = -1;
            double best = -1.0;
            for (Index e = 0; e < R; ++e) {
                if (used_e[static_cast<std::size_t>(e)]) continue;
                for (Index r = 0; r < R; ++r) {
                    if (used_r[static_cast<std::size_t>(r)]) continue;
                    if (S(e, r) > best) {
                        best = S(e, r);
                        be = e;
                        br = r;
                    }
                }
            }
            used_e[static_cast<std::size_t>(be)] = true;
            used_r[static_cast<std::size_t>(br)] = true;
            perm[static_cast<std::size_t>(br)] = be;
        }
    }

    Alignment a;
    a.permutation = perm;
    a.signs = Vector::Ones(R);
    a.scales = Vector::Ones(R);
    a.correlations = Vector::Zero(R);
    for (Index r = 0; r < R; ++r) {
        const auto e = perm[static_cast<std::size_t>(r)];
        const double inner = est_B.col(e).dot(ref_B.col(r));
        const double sq = est_B.col(e).squaredNorm();
        a.correlations[r] = S(e, r);
        if (inner < 0.0) a.signs[r] = -1.0;
        if (sq > 0.0 && inner != 0.0) a.scales[r] = std::abs(inner) / sq;
    }
    return a;
}

Alignment align_factors(const Factorization& est, const Factorization& ref) {
    return align_factors(est.Bcal, ref.Bcal);
}

Factorization apply_alignment(const Factorization& est, const Alignment& alignment) {
    const Index R = est.rank();
    if (static_cast<Index>(alignment.permutation.size()) != R)
        throw ParameterError("alignment rank does not match the factorization");
    Factorization out = est;
    for (Index r = 0; r < R; ++r) {
        const Index e = alignment.permutation[static_cast<std::size_t>(r)];
        const double factor = alignment.signs[r] * alignment.scales[r];
        out.Bcal.col(r) = factor * est.Bcal.col(e);
        out.C.col(r) = est.C.col(e) / factor;
    }
    return out;
}

}  // namespace tvnet
