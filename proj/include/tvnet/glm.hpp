#pragma once

// Generalized linear model building blocks shared by every solver.
//
// Losses use the Bregman form
//
//     f_j(A) = (1/m) [ 1^T (G*(y_j) + G(theta)) - theta^T y_j ],  theta = A x_j,
//
// which for the identity link (G(v) = v^2/2, G*(y) = y^2/2) collapses to
// (1/(2m)) ||y_j - A x_j||^2. The 1/m factor is kept everywhere so that
// regularization weights carry over between problem sizes.
//
// Time indices are 0-based in the API; messages report them 1-based.

#include "tvnet/common.hpp"

#include <string>
#include <string_view>

namespace tvnet {

struct LinkSpec {
    using Scalar = double (*)(double);

    std::string name;
    Scalar g = nullptr;       ///< link, derivative of G
    Scalar G = nullptr;       ///< convex potential
    Scalar G_star = nullptr;  ///< convex conjugate of G

    bool is_identity() const noexcept { return name == "identity"; }

    static LinkSpec identity();
    /// G(v) = log(1 + e^v); intended for {0,1} responses.
    static LinkSpec logistic();
    static LinkSpec from_name(std::string_view name);
};

enum class Mode { DirectedAR, UndirectedExtemporaneous };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view text);

/// Shape and structural zeros of the per-time regression y_k ~ g(A_k x_k).
class RegressionSetting {
public:
    RegressionSetting() = default;

    /// Directed AR(M): m = N, p = M N, full mask.
    static RegressionSetting directed_ar(Index nodes, Index lags);
    /// Extemporaneous regression: m = p = N, zero-diagonal mask.
    static RegressionSetting undirected(Index nodes);

    /// Replace the structural mask. The mask must be {0,1}, m x p, and keep
    /// the diagonal zero in the undirected setting.
    RegressionSetting with_mask(Matrix mask) const;

    Mode mode() const noexcept { return mode_; }
    Index nodes() const noexcept { return nodes_; }
    Index lags() const noexcept { return lags_; }
    Index rows() const noexcept { return rows_; }
    Index cols() const noexcept { return cols_; }
    Index size() const noexcept { return rows_ * cols_; }
    const Matrix& mask() const noexcept { return mask_; }

    /// First 0-based time index with a complete design (M for AR, 0 otherwise).
    Index first_time() const noexcept {
        return mode_ == Mode::DirectedAR ? lags_ : 0;
    }

    /// Column of A holding coefficient (target i <- source j) at lag l (0-based).
    Index column(Index source, Index lag) const noexcept {
        return lag * nodes_ + source;
    }

    bool operator==(const RegressionSetting& other) const;

private:
    Mode mode_ = Mode::DirectedAR;
    Index nodes_ = 0;
    Index lags_ = 1;
    Index rows_ = 0;
    Index cols_ = 0;
    Matrix mask_;
};

/// N x K observations, one column per time point.
class TimeSeriesPanel {
public:
    TimeSeriesPanel() = default;
    explicit TimeSeriesPanel(Matrix data);

    const Matrix& data() const noexcept { return data_; }
    Index nodes() const noexcept { return data_.rows(); }
    Index length() const noexcept { return data_.cols(); }

private:
    Matrix data_;
};

struct Design {
    Vector y;
    Vector x;
};

/// Check the panel is long enough for the setting (K > M) and has N rows.
void check_compatible(const RegressionSetting& setting, const TimeSeriesPanel& panel);

Design build_design(const RegressionSetting& setting, const TimeSeriesPanel& panel, Index j);

/// Bregman loss of predicting theta for response y, including the 1/m factor.
double bregman_loss(const Vector& theta, const Vector& y, const LinkSpec& link);

double offset_loss(const Matrix& A, Index j, const RegressionSetting& setting,
                   const TimeSeriesPanel& panel, const LinkSpec& link);

/// g(A x_j) - y_j.
Vector residual(const Matrix& A, Index j, const RegressionSetting& setting,
                const TimeSeriesPanel& panel, const LinkSpec& link);

/// Gradient of offset_loss with respect to A, masked by J.
Matrix offset_loss_gradient(const Matrix& A, Index j, const RegressionSetting& setting,
                            const TimeSeriesPanel& panel, const LinkSpec& link);

}  // namespace tvnet
