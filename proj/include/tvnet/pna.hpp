#pragma once

// Principal network analysis: factor the stacked graph estimates
//
//     Ahat (K x mp)  ~  C Bcal^T,   C: K x R eigenfeatures, Bcal: mp x R eigennetworks
//
// by minimizing
//
//     1/2 ||Ahat - C Bcal^T||_F^2 + lambda_star/2 (||C||_F^2 + ||Bcal||_F^2) + lambda_1 h_1(Bcal)
//
// with inertial proximal alternating linearized minimization (iPALM). h_1 is
// the network group norm of each column of Bcal reshaped to m x p.

#include "tvnet/glm.hpp"

#include <cstdint>
#include <vector>

namespace tvnet {

enum class PnaInit { Svd, Random };

std::string_view to_string(PnaInit init);
PnaInit init_from_string(std::string_view text);

struct IpalmConfig {
    Index t_max = 5000;
    double delta = 1e-6;
    PnaInit init = PnaInit::Svd;
    /// Seed of the random initialization.
    std::uint64_t seed = 0;

    void validate() const;
};

struct Factorization {
    Matrix C;     ///< K x R
    Matrix Bcal;  ///< mp x R, column r is vec(B^(r))
    double lambda_star = 0.0;
    double lambda_1 = 0.0;
    /// Objective at the initial point followed by one value per iteration.
    std::vector<double> history;
    Index iterations = 0;
    bool converged = false;

    Index rank() const noexcept { return C.cols(); }
    /// C Bcal^T.
    Matrix reconstruction() const { return C * Bcal.transpose(); }
    Matrix eigennetwork(Index r, const RegressionSetting& setting) const;
};

double mf_objective(const Matrix& C, const Matrix& Bcal, const Matrix& Ahat, double lambda_star,
                    double lambda_1, const RegressionSetting& setting);

struct MfGradients {
    Matrix dB;  ///< mp x R
    Matrix dC;  ///< K x R
};

/// Gradients of the smooth part (data term plus lambda_star term).
MfGradients mf_gradients(const Matrix& C, const Matrix& Bcal, const Matrix& Ahat, double lambda_star);

struct LipschitzBounds {
    double Lb = 0.0;  ///< ||C||_F^2 + lambda_star, bound for the Bcal block
    double Lc = 0.0;  ///< ||Bcal||_F^2 + lambda_star, bound for the C block
};

LipschitzBounds lipschitz_bounds(const Matrix& C, const Matrix& Bcal, double lambda_star);

/// Column-wise network group soft threshold; masked entries are cleared.
Matrix prox_B(const Matrix& Bcal, double t, const RegressionSetting& setting);

/// Rank-R start C = U S^(1/2), Bcal = V S^(1/2) (masked).
Factorization svd_init(const Matrix& Ahat, const RegressionSetting& setting, Index R);

Factorization ipalm_factorize(const Matrix& Ahat, const RegressionSetting& setting, Index R,
                              double lambda_star, double lambda_1, const IpalmConfig& config);

/// Norm of the step-scaled proximal gradient map at the factorization; zero
/// exactly at stationary points.
double stationarity_residual(const Factorization& f, const Matrix& Ahat, const RegressionSetting& setting);

/// Singular values of Ahat, largest first.
Vector scree(const Matrix& Ahat);

struct Alignment {
    /// permutation[r] is the estimated column matched to reference column r.
    std::vector<Index> permutation;
    Vector signs;
    /// Positive least-squares scale: signs[r] * scales[r] * est_r ~ ref_r.
    Vector scales;
    /// |cosine| of every matched pair.
    Vector correlations;
};

/// |cosine| similarity between eigennetwork columns, est x ref.
Matrix eigennetwork_similarity(const Matrix& est_B, const Matrix& ref_B);

/// Match estimated to reference eigennetworks. The assignment maximizes the
/// summed |cosine| exactly for R <= 8 and greedily beyond.
Alignment align_factors(const Matrix& est_B, const Matrix& ref_B);
Alignment align_factors(const Factorization& est, const Factorization& ref);

/// Reorder, flip and rescale est so that its columns line up with the
/// reference; C Bcal^T is unchanged.
Factorization apply_alignment(const Factorization& est, const Alignment& alignment);

}  // namespace tvnet
