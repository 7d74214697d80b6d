#pragma once

// Time-varying graph estimation by locally linear, kernel-weighted GLM
// regression. Every time point k owns an independent problem
//
//     min_{A, A'}  F_k(A, A') + lambda h(A)  [+ lambda_latent ||L||_*]
//     F_k(A, A') = sum_j w_kj f_j(A + (j - k) A')
//
// solved by proximal gradient with backtracking. By default each penalty group
// also covers the matching slope entries, scaled by the bandwidth.

#include "tvnet/glm.hpp"
#include "tvnet/kernel.hpp"
#include "tvnet/prox.hpp"

#include <optional>
#include <span>

namespace tvnet {

struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::GrangerGroups;
    double lambda = 0.1;
    /// Nuclear-norm weight of the additive low-rank block; 0 disables it.
    double lambda_latent = 0.0;
    /// Put each group's slope entries (measured per bandwidth) in the same
    /// group as its level entries, so an edge absent from the window has
    /// neither level nor slope. When false the slope is unpenalized.
    bool joint_slope = true;

    void validate() const;
};

/// K stacked vectorized graphs; row k of Acal is vec(A_k)^T (column-major).
struct GraphSequence {
    RegressionSetting setting;
    Matrix Acal;
    Matrix Aprime;
    std::optional<Matrix> Lcal;
    /// Kernel side the sequence was fitted with; empty for assembled estimates.
    std::optional<KernelSide> side;

    static GraphSequence zeros(const RegressionSetting& setting, Index K);

    Index length() const noexcept { return Acal.rows(); }
    /// Rows before this index are undefined (AR lags without a design).
    Index first_defined() const noexcept { return setting.first_time(); }

    Matrix graph(Index k) const;
    Matrix slope(Index k) const;
    /// A_k + L_k; equals graph(k) without a latent block.
    Matrix effective(Index k) const;

    void set_graph(Index k, const Matrix& A);
    void set_slope(Index k, const Matrix& Ap);
    void set_latent(Index k, const Matrix& L);
};

/// F_k evaluated with an explicit weight row (length K).
double objective_F(const Matrix& A, const Matrix& Ap, Index k, const Vector& weights,
                   const RegressionSetting& setting, const TimeSeriesPanel& panel,
                   const LinkSpec& link);
double objective_F(const Matrix& A, const Matrix& Ap, Index k, const KernelWeights& weights,
                   const RegressionSetting& setting, const TimeSeriesPanel& panel,
                   const LinkSpec& link);

struct LocalGradient {
    Matrix E;  ///< dF_k / dA_k
    Matrix H;  ///< dF_k / dA'_k
};

LocalGradient grad_F(const Matrix& A, const Matrix& Ap, Index k, const Vector& weights,
                     const RegressionSetting& setting, const TimeSeriesPanel& panel,
                     const LinkSpec& link);
LocalGradient grad_F(const Matrix& A, const Matrix& Ap, Index k, const KernelWeights& weights,
                     const RegressionSetting& setting, const TimeSeriesPanel& panel,
                     const LinkSpec& link);

struct FitOptions {
    double s0 = 1.0;
    Index t_max = 2000;
    double tol = 1e-5;
    unsigned workers = 1;
    /// Keep the slope at its initial value (zero unless warm-started).
    bool freeze_slope = false;

    void validate() const;
};

struct LocalFit {
    Matrix A;
    Matrix Aprime;
    Matrix L;  ///< empty unless the latent block is enabled
    Index iterations = 0;
    bool converged = false;
    double objective = 0.0;  ///< F_k + penalties at the returned point
};

/// Solve the local problem at time k with an explicit weight row. The slope is
/// internally measured per `slope_scale` time steps (the kernel bandwidth),
/// which balances the two blocks; results are reported per time step.
LocalFit fit_local(const Vector& weights, Index k, double slope_scale,
                   const RegressionSetting& setting, const TimeSeriesPanel& panel,
                   const LinkSpec& link, const PenaltySpec& penalty, const FitOptions& options,
                   const LocalFit* init = nullptr);

/// Fit every defined time point.
GraphSequence fit_tv_graphs(const TimeSeriesPanel& panel, const RegressionSetting& setting,
                            const LinkSpec& link, const PenaltySpec& penalty,
                            const KernelWeights& weights, const FitOptions& options,
                            const GraphSequence* init = nullptr);

/// Fit only the listed time points; other rows are left at zero.
GraphSequence fit_tv_graphs(const TimeSeriesPanel& panel, const RegressionSetting& setting,
                            const LinkSpec& link, const PenaltySpec& penalty,
                            const KernelWeights& weights, const FitOptions& options,
                            std::span<const Index> times);

}  // namespace tvnet
