#include "tvnet/prox.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace tvnet {

std::string_view to_string(PenaltyKind kind) {
    return kind == PenaltyKind::GrangerGroups ? "granger" : "symmetric";
}

PenaltyKind penalty_from_string(std::string_view text) {
    if (text == "granger" || text == "lag_groups") return PenaltyKind::GrangerGroups;
    if (text == "symmetric" || text == "symmetric_pairs") return PenaltyKind::SymmetricPairs;
    throw ParameterError("unknown penalty kind '" + std::string(text) + "'");
}

namespace {

void check_threshold(double t) {
    if (!(t >= 0) || !std::isfinite(t)) throw ParameterError("threshold must be finite and >= 0");
}

}  // namespace

GroupStructure lag_groups(const RegressionSetting& setting) {
    GroupStructure gs;
    gs.rows = setting.rows();
    gs.cols = setting.cols();
    const auto& mask = setting.mask();
    const Index m = gs.rows;
    for (Index src = 0; src < setting.nodes(); ++src) {
        for (Index i = 0; i < m; ++i) {
            std::vector<Index> group;
            for (Index l = 0; l < setting.lags(); ++l) {
                const Index c = setting.column(src, l);
                const Index idx = c * m + i;
                if (mask(i, c) != 0.0)
                    group.push_back(idx);
                else
                    gs.zero.push_back(idx);
            }
            if (!group.empty()) gs.groups.push_back(std::move(group));
        }
    }
    return gs;
}

GroupStructure symmetric_pair_groups(Index n, const Matrix& mask) {
    if (mask.rows() != n || mask.cols() != n) throw ShapeError("symmetric pairs need a square mask");
    GroupStructure gs;
    gs.rows = n;
    gs.cols = n;
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const Index idx = j * n + i;
            if (mask(i, j) == 0.0) {
                gs.zero.push_back(idx);
            } else if (i == j) {
                gs.free.push_back(idx);
            } else if (i < j) {
                std::vector<Index> group{idx};
                if (mask(j, i) != 0.0) group.push_back(i * n + j);
                gs.groups.push_back(std::move(group));
            } else if (mask(j, i) == 0.0) {
                // partner is a structural zero, so this entry is a group by itself
                gs.groups.push_back({idx});
            }
        }
    }
    return gs;
}

GroupStructure penalty_groups(const RegressionSetting& setting, PenaltyKind kind) {
    if (kind == PenaltyKind::GrangerGroups) return lag_groups(setting);
    if (setting.rows() != setting.cols())
        throw ShapeError("symmetric-pair penalty needs a square coefficient matrix");
    return symmetric_pair_groups(setting.rows(), setting.mask());
}

GroupStructure network_groups(const RegressionSetting& setting) {
    return setting.mode() == Mode::DirectedAR ? lag_groups(setting)
                                              : symmetric_pair_groups(setting.rows(), setting.mask());
}

double group_norm_sum(const Eigen::Ref<const Vector>& values, const GroupStructure& gs) {
    double total = 0.0;
    for (const auto& group : gs.groups) {
        double sq = 0.0;
        for (Index idx : group) sq += values[idx] * values[idx];
        total += std::sqrt(sq);
    }
    return total;
}

void shrink_groups(Eigen::Ref<Vector> values, const GroupStructure& gs, double t) {
    check_threshold(t);
    if (values.size() != gs.size()) throw ShapeError("group structure does not match value count");
    for (const auto& group : gs.groups) {
        double sq = 0.0;
        for (Index idx : group) sq += values[idx] * values[idx];
        const double norm = std::sqrt(sq);
        const double scale = norm > t ? (norm - t) / norm : 0.0;
        for (Index idx : group) values[idx] *= scale;
    }
    for (Index idx : gs.zero) values[idx] = 0.0;
}

Matrix prox_group(const Matrix& A, double t, const RegressionSetting& setting) {
    if (A.rows() != setting.rows() || A.cols() != setting.cols())
        throw ShapeError("matrix shape does not match setting");
    Matrix out = A;
    shrink_groups(out.reshaped(), lag_groups(setting), t);
    return out;
}

Matrix prox_symmetric_pairs(const Matrix& A, double t) {
    return prox_symmetric_pairs(A, t, Matrix::Ones(A.rows(), A.cols()));
}

Matrix prox_symmetric_pairs(const Matrix& A, double t, const Matrix& mask) {
    if (A.rows() != A.cols()) throw ShapeError("symmetric-pair prox needs a square matrix");
    Matrix out = A;
    shrink_groups(out.reshaped(), symmetric_pair_groups(A.rows(), mask), t);
    return out;
}

Matrix prox_nuclear(const Matrix& L, double t) {
    check_threshold(t);
    if (t == 0.0 || L.size() == 0) return L;
    Eigen::BDCSVD<Matrix> svd(L, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericError("SVD failed in nuclear-norm prox");
    const Vector shrunk = (svd.singularValues().array() - t).cwiseMax(0.0).matrix();
    return svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace tvnet
