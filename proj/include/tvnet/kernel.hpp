#pragma once

#include "tvnet/common.hpp"

#include <string_view>

namespace tvnet {

enum class KernelSide { Left, Center, Right };
enum class KernelShape { Gaussian, Epanechnikov };

std::string_view to_string(KernelSide side);
KernelSide side_from_string(std::string_view text);
std::string_view to_string(KernelShape shape);
KernelShape shape_from_string(std::string_view text);

/// Row-normalized K x K kernel weights. Row k holds w_{kj} for the local
/// problem centred at time k.
///
/// Before normalization the centre kernel is symmetric in (j - k), the right
/// kernel keeps j >= k, and the left kernel keeps j <= k, so raw left and
/// right weights are transposes of each other. `row_mass` keeps the raw row
/// sums, which lets callers recover the unnormalized weights.
struct KernelWeights {
    Matrix W;
    Vector row_mass;
    KernelSide side = KernelSide::Center;
    KernelShape shape = KernelShape::Gaussian;
    double bandwidth = 1.0;
    /// Columns j < first_index carry no weight (e.g. AR lags without a design).
    Index first_index = 0;

    Index size() const noexcept { return W.rows(); }
    Matrix raw() const { return row_mass.asDiagonal() * W; }
    /// Number of time points with positive weight in row k.
    Index support(Index k) const;
};

/// Unnormalized kernel profile at offset d = j - k. The Gaussian profile is
/// exp(-d^2 / (2 eta^2)).
double kernel_profile(KernelShape shape, double offset, double bandwidth);

KernelWeights make_kernel(Index K, double bandwidth, KernelShape shape, KernelSide side,
                          Index first_index = 0);

/// Centre-kernel row k restricted to [begin, end] (inclusive) and renormalized.
Vector truncated_row(const KernelWeights& center, Index k, Index begin, Index end);

}  // namespace tvnet
