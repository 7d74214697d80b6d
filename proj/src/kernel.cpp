#include "tvnet/kernel.hpp"

#include <cmath>
#include <string>

namespace tvnet {

std::string_view to_string(KernelSide side) {
    switch (side) {
        case KernelSide::Left: return "left";
        case KernelSide::Center: return "center";
        case KernelSide::Right: return "right";
    }
    return "center";
}

KernelSide side_from_string(std::string_view text) {
    if (text == "left") return KernelSide::Left;
    if (text == "center" || text == "centre") return KernelSide::Center;
    if (text == "right") return KernelSide::Right;
    throw ParameterError("unknown kernel side '" + std::string(text) + "'");
}

std::string_view to_string(KernelShape shape) {
    return shape == KernelShape::Gaussian ? "gaussian" : "epanechnikov";
}

KernelShape shape_from_string(std::string_view text) {
    if (text == "gaussian") return KernelShape::Gaussian;
    if (text == "epanechnikov") return KernelShape::Epanechnikov;
    throw ParameterError("unknown kernel shape '" + std::string(text) + "'");
}

double kernel_profile(KernelShape shape, double offset, double bandwidth) {
    const double u = offset / bandwidth;
    switch (shape) {
        case KernelShape::Gaussian: return std::exp(-0.5 * u * u);
        case KernelShape::Epanechnikov: return std::abs(u) < 1.0 ? 1.0 - u * u : 0.0;
    }
    return 0.0;
}

Index KernelWeights::support(Index k) const {
    return (W.row(k).array() > 0.0).count();
}

KernelWeights make_kernel(Index K, double bandwidth, KernelShape shape, KernelSide side,
                          Index first_index) {
    if (K < 2) throw ParameterError("kernel needs at least two time points");
    if (!(bandwidth > 0) || !std::isfinite(bandwidth))
        throw ParameterError("kernel bandwidth must be positive");
    if (first_index < 0 || first_index >= K) throw ParameterError("kernel first_index out of range");

    KernelWeights kw;
    kw.side = side;
    kw.shape = shape;
    kw.bandwidth = bandwidth;
    kw.first_index = first_index;
    kw.W = Matrix::Zero(K, K);
    kw.row_mass = Vector::Zero(K);

    for (Index k = 0; k < K; ++k) {
        const Index lo = side == KernelSide::Right ? k : first_index;
        const Index hi = side == KernelSide::Left ? k : K - 1;
        for (Index j = std::max(lo, first_index); j <= hi; ++j)
            kw.W(k, j) = kernel_profile(shape, static_cast<double>(j - k), bandwidth);
        const double mass = kw.W.row(k).sum();
        kw.row_mass[k] = mass;
        if (mass > 0) kw.W.row(k) /= mass;
    }
    return kw;
}

Vector truncated_row(const KernelWeights& center, Index k, Index begin, Index end) {
    const Index K = center.size();
    if (k < begin || k > end || begin < 0 || end >= K)
        throw IndexError("truncation window does not contain time " + std::to_string(k + 1));
    Vector row = Vector::Zero(K);
    for (Index j = std::max(begin, center.first_index); j <= end; ++j)
        row[j] = kernel_profile(center.shape, static_cast<double>(j - k), center.bandwidth);
    const double mass = row.sum();
    if (mass > 0) row /= mass;
    return row;
}

}  // namespace tvnet
