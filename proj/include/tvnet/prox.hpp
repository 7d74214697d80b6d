#pragma once

// Group structures over vectorized m x p coefficient matrices and the
// proximal operators built on them.

#include "tvnet/glm.hpp"

#include <string_view>
#include <vector>

namespace tvnet {

enum class PenaltyKind { GrangerGroups, SymmetricPairs };

std::string_view to_string(PenaltyKind kind);
PenaltyKind penalty_from_string(std::string_view text);

/// Partition of the entries of vec(A) (column-major, m x p) into penalized
/// groups, unpenalized entries, and structurally zero entries.
struct GroupStructure {
    Index rows = 0;
    Index cols = 0;
    std::vector<std::vector<Index>> groups;
    std::vector<Index> free;
    std::vector<Index> zero;

    Index size() const noexcept { return rows * cols; }
};

/// Granger groups: for each (target i, source j) the coefficients across all
/// lags. In the undirected setting these are single entries.
GroupStructure lag_groups(const RegressionSetting& setting);

/// Unordered pairs ([A]_ij, [A]_ji), i < j; the diagonal is unpenalized.
/// Entries where `mask` is zero are structural zeros.
GroupStructure symmetric_pair_groups(Index n, const Matrix& mask);

GroupStructure penalty_groups(const RegressionSetting& setting, PenaltyKind kind);

/// Groups that define "an edge" of a network: lag groups for AR, symmetric
/// pairs for undirected graphs.
GroupStructure network_groups(const RegressionSetting& setting);

double group_norm_sum(const Eigen::Ref<const Vector>& values, const GroupStructure& gs);

/// In-place group soft threshold: each group a becomes max(0, 1 - t/||a||) a,
/// structural zeros are cleared, free entries are left alone.
void shrink_groups(Eigen::Ref<Vector> values, const GroupStructure& gs, double t);

Matrix prox_group(const Matrix& A, double t, const RegressionSetting& setting);

Matrix prox_symmetric_pairs(const Matrix& A, double t);
Matrix prox_symmetric_pairs(const Matrix& A, double t, const Matrix& mask);

/// Singular value soft thresholding.
Matrix prox_nuclear(const Matrix& L, double t);

}  // namespace tvnet
