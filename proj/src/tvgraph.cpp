#include "tvnet/tvgraph.hpp"

#include "tvnet/parallel.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace tvnet {

void PenaltySpec::validate() const {
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw ParameterError("lambda must be finite and >= 0");
    if (!(lambda_latent >= 0) || !std::isfinite(lambda_latent))
        throw ParameterError("lambda_latent must be finite and >= 0");
}

void FitOptions::validate() const {
    if (!(s0 > 0) || !std::isfinite(s0)) throw ParameterError("initial step size s0 must be positive");
    if (t_max < 1) throw ParameterError("t_max must be at least 1");
    if (!(tol > 0)) throw ParameterError("tolerance must be positive");
}

GraphSequence GraphSequence::zeros(const RegressionSetting& setting, Index K) {
    GraphSequence seq;
    seq.setting = setting;
    seq.Acal = Matrix::Zero(K, setting.size());
    seq.Aprime = Matrix::Zero(K, setting.size());
    return seq;
}

Matrix GraphSequence::graph(Index k) const {
    return Acal.row(k).reshaped(setting.rows(), setting.cols());
}

Matrix GraphSequence::slope(Index k) const {
    return Aprime.row(k).reshaped(setting.rows(), setting.cols());
}

Matrix GraphSequence::effective(Index k) const {
    if (!Lcal) return graph(k);
    return graph(k) + Lcal->row(k).reshaped(setting.rows(), setting.cols());
}

void GraphSequence::set_graph(Index k, const Matrix& A) { Acal.row(k) = A.reshaped().transpose(); }

void GraphSequence::set_slope(Index k, const Matrix& Ap) { Aprime.row(k) = Ap.reshaped().transpose(); }

void GraphSequence::set_latent(Index k, const Matrix& L) {
    if (!Lcal) Lcal = Matrix::Zero(Acal.rows(), Acal.cols());
    Lcal->row(k) = L.reshaped().transpose();
}

namespace {

void check_local_args(const Matrix& A, const Matrix& Ap, Index k, const Vector& weights,
                      const RegressionSetting& setting, const TimeSeriesPanel& panel) {
    check_compatible(setting, panel);
    if (A.rows() != setting.rows() || A.cols() != setting.cols() || Ap.rows() != A.rows() ||
        Ap.cols() != A.cols())
        throw ShapeError("local coefficients do not match the regression setting");
    if (weights.size() != panel.length()) throw ShapeError("weight row length must equal K");
    if (k < 0 || k >= panel.length())
        throw IndexError("time index " + std::to_string(k + 1) + " outside [1, " +
                         std::to_string(panel.length()) + "]");
}

}  // namespace

double objective_F(const Matrix& A, const Matrix& Ap, Index k, const Vector& weights,
                   const RegressionSetting& setting, const TimeSeriesPanel& panel,
                   const LinkSpec& link) {
    check_local_args(A, Ap, k, weights, setting, panel);
    double total = 0.0;
    for (Index j = setting.first_time(); j < panel.length(); ++j) {
        if (weights[j] == 0.0) continue;
        const Matrix Aj = A + static_cast<double>(j - k) * Ap;
        total += weights[j] * offset_loss(Aj, j, setting, panel, link);
    }
    return total;
}

double objective_F(const Matrix& A, const Matrix& Ap, Index k, const KernelWeights& weights,
                   const RegressionSetting& setting, const TimeSeriesPanel& panel,
                   const LinkSpec& link) {
    return objective_F(A, Ap, k, Vector(weights.W.row(k).transpose()), setting, panel, link);
}

LocalGradient grad_F(const Matrix& A, const Matrix& Ap, Index k, const Vector& weights,
                     const RegressionSetting& setting, const TimeSeriesPanel& panel,
                     const LinkSpec& link) {
    check_local_args(A, Ap, k, weights, setting, panel);
    LocalGradient grad{Matrix::Zero(A.rows(), A.cols()), Matrix::Zero(A.rows(), A.cols())};
    for (Index j = setting.first_time(); j < panel.length(); ++j) {
        if (weights[j] == 0.0) continue;
        const double offset = static_cast<double>(j - k);
        const Matrix g = offset_loss_gradient(A + offset * Ap, j, setting, panel, link);
        grad.E += weights[j] * g;
        grad.H += (weights[j] * offset) * g;
    }
    return grad;
}

LocalGradient grad_F(const Matrix& A, const Matrix& Ap, Index k, const KernelWeights& weights,
                     const RegressionSetting& setting, const TimeSeriesPanel& panel,
                     const LinkSpec& link) {
    return grad_F(A, Ap, k, Vector(weights.W.row(k).transpose()), setting, panel, link);
}

namespace {

// Smooth part of the local problem over the stacked variable W = [A + L | S],
// where S is the slope per `scale` time steps. For the identity link the loss
// is quadratic and is evaluated from weighted second moments; otherwise the
// kernel sum is taken point by point.
class LocalLoss {
public:
    LocalLoss(const Vector& weights, Index k, double scale, const RegressionSetting& setting,
              const TimeSeriesPanel& panel, const LinkSpec& link)
        : link_(link), m_(setting.rows()), p_(setting.cols()) {
        std::vector<Index> active;
        for (Index j = setting.first_time(); j < panel.length(); ++j)
            if (weights[j] > 0.0) active.push_back(j);
        const Index n = static_cast<Index>(active.size());
        Z_.resize(2 * p_, n);
        Y_.resize(m_, n);
        w_.resize(n);
        for (Index c = 0; c < n; ++c) {
            const Index j = active[static_cast<std::size_t>(c)];
            const Design d = build_design(setting, panel, j);
            const double tau = static_cast<double>(j - k) / scale;
            Z_.col(c).head(p_) = d.x;
            Z_.col(c).tail(p_) = tau * d.x;
            Y_.col(c) = d.y;
            w_[c] = weights[j];
        }
        if (link_.is_identity()) {
            const Matrix Zw = Z_ * w_.asDiagonal();
            Szz_ = Zw * Z_.transpose();
            Syz_ = Y_ * Zw.transpose();
            yy_ = (Y_.array().square().colwise().sum().transpose() * w_.array()).sum();
        }
    }

    /// Loss value at W; writes the unmasked gradient into `grad`.
    double evaluate(const Matrix& W, Matrix& grad) const {
        const double inv_m = 1.0 / static_cast<double>(m_);
        if (link_.is_identity()) {
            grad.noalias() = W * Szz_;
            const double quad = (W.array() * grad.array()).sum();
            const double lin = (W.array() * Syz_.array()).sum();
            grad -= Syz_;
            grad *= inv_m;
            // clamp tiny negative values from cancellation; the loss is >= 0
            return std::max(0.0, 0.5 * inv_m * (quad - 2.0 * lin + yy_));
        }
        grad.setZero(W.rows(), W.cols());
        double total = 0.0;
        for (Index c = 0; c < Z_.cols(); ++c) {
            const Vector theta = W * Z_.col(c);
            total += w_[c] * bregman_loss(theta, Y_.col(c), link_);
            const Vector r = theta.unaryExpr(link_.g) - Y_.col(c);
            grad.noalias() += (w_[c] * inv_m) * r * Z_.col(c).transpose();
        }
        return total;
    }

private:
    LinkSpec link_;
    Index m_, p_;
    Matrix Z_, Y_;
    Vector w_;
    Matrix Szz_, Syz_;
    double yy_ = 0.0;
};

// Groups over vec([A | S]) where every level group also owns the matching
// slope entries.
GroupStructure with_slope(const GroupStructure& gs) {
    const Index shift = gs.size();
    GroupStructure out;
    out.rows = gs.rows;
    out.cols = 2 * gs.cols;
    out.groups.reserve(gs.groups.size());
    for (const auto& g : gs.groups) {
        std::vector<Index> joint(g);
        for (Index idx : g) joint.push_back(idx + shift);
        out.groups.push_back(std::move(joint));
    }
    for (Index idx : gs.free) {
        out.free.push_back(idx);
        out.free.push_back(idx + shift);
    }
    for (Index idx : gs.zero) {
        out.zero.push_back(idx);
        out.zero.push_back(idx + shift);
    }
    return out;
}

double nuclear_norm(const Matrix& L) {
    if (L.size() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(L);
    return svd.singularValues().sum();
}

}  // namespace

LocalFit fit_local(const Vector& weights, Index k, double slope_scale,
                   const RegressionSetting& setting, const TimeSeriesPanel& panel,
                   const LinkSpec& link, const PenaltySpec& penalty, const FitOptions& options,
                   const LocalFit* init) {
    options.validate();
    penalty.validate();
    check_compatible(setting, panel);
    if (weights.size() != panel.length()) throw ShapeError("weight row length must equal K");
    if (!(slope_scale > 0)) throw ParameterError("slope scale must be positive");

    const Index m = setting.rows();
    const Index p = setting.cols();
    const Matrix& mask = setting.mask();
    const GroupStructure groups = penalty_groups(setting, penalty.kind);
    // with a frozen slope only the level is penalized
    const bool joint = penalty.joint_slope && !options.freeze_slope;
    const GroupStructure joint_groups = joint ? with_slope(groups) : GroupStructure{};
    const bool latent = penalty.lambda_latent > 0.0;

    const LocalLoss loss(weights, k, slope_scale, setting, panel, link);

    Matrix A = Matrix::Zero(m, p);
    Matrix S = Matrix::Zero(m, p);
    Matrix L = latent ? Matrix::Zero(m, p) : Matrix();
    if (init) {
        A = init->A.cwiseProduct(mask);
        S = (slope_scale * init->Aprime).cwiseProduct(mask);
        if (latent && init->L.size() == A.size()) L = init->L;
    }

    auto stack = [&](const Matrix& a, const Matrix& s, const Matrix& l) {
        Matrix W(m, 2 * p);
        W.leftCols(p) = latent ? Matrix(a + l) : a;
        W.rightCols(p) = s;
        return W;
    };
    auto penalty_value = [&](const Matrix& a, const Matrix& s, const Matrix& l) {
        double v = 0.0;
        if (joint) {
            Matrix as(m, 2 * p);
            as << a, s;
            v = penalty.lambda * group_norm_sum(as.reshaped(), joint_groups);
        } else {
            v = penalty.lambda * group_norm_sum(a.reshaped(), groups);
        }
        if (latent) v += penalty.lambda_latent * nuclear_norm(l);
        return v;
    };

    Matrix grad(m, 2 * p);
    double smooth = loss.evaluate(stack(A, S, L), grad);
    double total = smooth + penalty_value(A, S, L);
    const double initial_total = total;
    if (!std::isfinite(total))
        throw NonConvergenceError("non-finite objective at initialization, time " + std::to_string(k + 1), k);

    double step = options.s0;
    Matrix trial_grad(m, 2 * p);
    LocalFit fit;
    Index iter = 0;
    for (; iter < options.t_max; ++iter) {
        const Matrix gA = grad.leftCols(p).cwiseProduct(mask);
        const Matrix gS = options.freeze_slope ? Matrix::Zero(m, p)
                                               : Matrix(grad.rightCols(p).cwiseProduct(mask));

        Matrix A_new, S_new, L_new;
        double smooth_new = 0.0;
        double change_sq = 0.0;
        for (;;) {
            if (joint) {
                Matrix as(m, 2 * p);
                as << A - step * gA, S - step * gS;
                shrink_groups(as.reshaped(), joint_groups, step * penalty.lambda);
                A_new = as.leftCols(p);
                S_new = as.rightCols(p);
            } else {
                A_new = A - step * gA;
                shrink_groups(A_new.reshaped(), groups, step * penalty.lambda);
                S_new = S - step * gS;
            }
            if (latent) L_new = prox_nuclear(L - step * gA, step * penalty.lambda_latent).cwiseProduct(mask);

            const Matrix dA = A_new - A;
            const Matrix dS = S_new - S;
            double inner = (gA.array() * dA.array()).sum() + (gS.array() * dS.array()).sum();
            change_sq = dA.squaredNorm() + dS.squaredNorm();
            if (latent) {
                const Matrix dL = L_new - L;
                inner += (gA.array() * dL.array()).sum();
                change_sq += dL.squaredNorm();
            }
            smooth_new = loss.evaluate(stack(A_new, S_new, L_new), trial_grad);
            const double bound = smooth + inner + change_sq / (2.0 * step);
            if (std::isfinite(smooth_new) &&
                smooth_new <= bound + 1e-12 * std::max(1.0, std::abs(smooth)))
                break;
            step *= 0.5;
            if (step < 1e-30)
                throw NonConvergenceError("step size underflow at time " + std::to_string(k + 1), k);
        }

        const double total_new = smooth_new + penalty_value(A_new, S_new, L_new);
        if (!std::isfinite(total_new) || (initial_total > 0 && total_new > 1e3 * initial_total))
            throw NonConvergenceError("objective diverged at time " + std::to_string(k + 1), k);
        assert(total_new <= total + 1e-9 * std::max(1.0, std::abs(total)));

        const double scale_sq =
            std::max(A.squaredNorm() + S.squaredNorm() + (latent ? L.squaredNorm() : 0.0),
                     A_new.squaredNorm() + S_new.squaredNorm() + (latent ? L_new.squaredNorm() : 0.0));
        A = std::move(A_new);
        S = std::move(S_new);
        if (latent) L = std::move(L_new);
        smooth = smooth_new;
        total = total_new;
        grad.swap(trial_grad);

        if (change_sq == 0.0 || change_sq <= options.tol * options.tol * scale_sq) {
            fit.converged = true;
            ++iter;
            break;
        }
    }

    fit.A = std::move(A);
    fit.Aprime = S / slope_scale;
    fit.L = std::move(L);
    fit.iterations = iter;
    fit.objective = total;
    return fit;
}

namespace {

GraphSequence fit_times(const TimeSeriesPanel& panel, const RegressionSetting& setting,
                        const LinkSpec& link, const PenaltySpec& penalty,
                        const KernelWeights& weights, const FitOptions& options,
                        std::span<const Index> times, const GraphSequence* init) {
    options.validate();
    penalty.validate();
    check_compatible(setting, panel);
    const Index K = panel.length();
    if (weights.size() != K) throw ShapeError("kernel size must equal panel length K");

    for (Index k : times)
        if (k < setting.first_time() || k >= K)
            throw IndexError("cannot fit time " + std::to_string(k + 1) + "; valid range [" +
                             std::to_string(setting.first_time() + 1) + ", " + std::to_string(K) + "]");

    GraphSequence seq = GraphSequence::zeros(setting, K);
    seq.side = weights.side;
    const bool latent = penalty.lambda_latent > 0.0;
    if (latent) seq.Lcal = Matrix::Zero(K, setting.size());

    std::vector<LocalFit> fits(times.size());
    parallel_for(static_cast<Index>(times.size()), options.workers, [&](Index i) {
        const Index k = times[static_cast<std::size_t>(i)];
        LocalFit start;
        const LocalFit* start_ptr = nullptr;
        if (init) {
            start.A = init->graph(k);
            start.Aprime = init->slope(k);
            if (init->Lcal) start.L = init->Lcal->row(k).reshaped(setting.rows(), setting.cols());
            start_ptr = &start;
        }
        const Vector row = weights.W.row(k).transpose();
        fits[static_cast<std::size_t>(i)] = fit_local(row, k, weights.bandwidth, setting, panel, link,
                                                      penalty, options, start_ptr);
    });

    for (std::size_t i = 0; i < times.size(); ++i) {
        const Index k = times[i];
        seq.set_graph(k, fits[i].A);
        seq.set_slope(k, fits[i].Aprime);
        if (latent) seq.set_latent(k, fits[i].L);
    }
    return seq;
}

}  // namespace

GraphSequence fit_tv_graphs(const TimeSeriesPanel& panel, const RegressionSetting& setting,
                            const LinkSpec& link, const PenaltySpec& penalty,
                            const KernelWeights& weights, const FitOptions& options,
                            const GraphSequence* init) {
    std::vector<Index> times;
    for (Index k = setting.first_time(); k < panel.length(); ++k) times.push_back(k);
    return fit_times(panel, setting, link, penalty, weights, options, times, init);
}

GraphSequence fit_tv_graphs(const TimeSeriesPanel& panel, const RegressionSetting& setting,
                            const LinkSpec& link, const PenaltySpec& penalty,
                            const KernelWeights& weights, const FitOptions& options,
                            std::span<const Index> times) {
    return fit_times(panel, setting, link, penalty, weights, options, times, nullptr);
}

}  // namespace tvnet
