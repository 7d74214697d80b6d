#include "tvnet/glm.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tvnet {

namespace {

double identity_g(double v) { return v; }
double identity_G(double v) { return 0.5 * v * v; }

double logistic_g(double v) {
    if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
}

double logistic_G(double v) {
    return v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
}

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

double logistic_G_star(double y) {
    if (y < 0 || y > 1) return std::numeric_limits<double>::infinity();
    return xlogx(y) + xlogx(1 - y);
}

std::string time_range(Index first, Index last) {
    std::ostringstream os;
    os << "[" << first + 1 << ", " << last + 1 << "]";
    return os.str();
}

}  // namespace

LinkSpec LinkSpec::identity() { return {"identity", identity_g, identity_G, identity_G}; }

LinkSpec LinkSpec::logistic() {
    return {"logistic", logistic_g, logistic_G, logistic_G_star};
}

LinkSpec LinkSpec::from_name(std::string_view name) {
    if (name == "identity" || name == "gaussian") return identity();
    if (name == "logistic") return logistic();
    throw ParameterError("unknown link '" + std::string(name) + "'");
}

std::string_view to_string(Mode mode) {
    return mode == Mode::DirectedAR ? "ar" : "undirected";
}

Mode mode_from_string(std::string_view text) {
    if (text == "ar" || text == "directed") return Mode::DirectedAR;
    if (text == "undirected") return Mode::UndirectedExtemporaneous;
    throw ParameterError("unknown regression mode '" + std::string(text) + "'");
}

RegressionSetting RegressionSetting::directed_ar(Index nodes, Index lags) {
    if (nodes < 1) throw ParameterError("node count must be positive");
    if (lags < 1) throw ParameterError("AR lag order must be at least 1");
    RegressionSetting s;
    s.mode_ = Mode::DirectedAR;
    s.nodes_ = nodes;
    s.lags_ = lags;
    s.rows_ = nodes;
    s.cols_ = nodes * lags;
    s.mask_ = Matrix::Ones(s.rows_, s.cols_);
    return s;
}

RegressionSetting RegressionSetting::undirected(Index nodes) {
    if (nodes < 1) throw ParameterError("node count must be positive");
    RegressionSetting s;
    s.mode_ = Mode::UndirectedExtemporaneous;
    s.nodes_ = nodes;
    s.lags_ = 1;
    s.rows_ = nodes;
    s.cols_ = nodes;
    s.mask_ = Matrix::Ones(nodes, nodes);
    s.mask_.diagonal().setZero();
    return s;
}

RegressionSetting RegressionSetting::with_mask(Matrix mask) const {
    if (mask.rows() != rows_ || mask.cols() != cols_)
        throw ShapeError("mask must be " + std::to_string(rows_) + "x" + std::to_string(cols_));
    for (Index c = 0; c < mask.cols(); ++c)
        for (Index r = 0; r < mask.rows(); ++r)
            if (mask(r, c) != 0.0 && mask(r, c) != 1.0)
                throw ParameterError("mask entries must be 0 or 1");
    if (mode_ == Mode::UndirectedExtemporaneous && mask.diagonal().any())
        throw ParameterError("undirected mask must have a zero diagonal");
    RegressionSetting s = *this;
    s.mask_ = std::move(mask);
    return s;
}

bool RegressionSetting::operator==(const RegressionSetting& other) const {
    return mode_ == other.mode_ && nodes_ == other.nodes_ && lags_ == other.lags_ &&
           mask_ == other.mask_;
}

TimeSeriesPanel::TimeSeriesPanel(Matrix data) : data_(std::move(data)) {
    if (!data_.allFinite()) throw ParameterError("panel contains non-finite entries");
}

void check_compatible(const RegressionSetting& setting, const TimeSeriesPanel& panel) {
    if (panel.nodes() != setting.nodes())
        throw ShapeError("panel has " + std::to_string(panel.nodes()) + " nodes, setting expects " +
                         std::to_string(setting.nodes()));
    if (panel.length() <= setting.first_time())
        throw ParameterError("panel length K must exceed the lag order M");
}

Design build_design(const RegressionSetting& setting, const TimeSeriesPanel& panel, Index j) {
    const Index K = panel.length();
    const Index first = setting.first_time();
    if (j < first || j >= K)
        throw IndexError("time index " + std::to_string(j + 1) + " outside valid range " +
                         time_range(first, K - 1));
    if (panel.nodes() != setting.nodes()) throw ShapeError("panel node count does not match setting");

    const auto& X = panel.data();
    Design d;
    d.y = X.col(j);
    if (setting.mode() == Mode::DirectedAR) {
        const Index N = setting.nodes();
        d.x.resize(setting.cols());
        for (Index l = 0; l < setting.lags(); ++l) d.x.segment(l * N, N) = X.col(j - 1 - l);
    } else {
        d.x = X.col(j);
    }
    return d;
}

double bregman_loss(const Vector& theta, const Vector& y, const LinkSpec& link) {
    if (!theta.allFinite()) throw NumericError("non-finite linear predictor");
    const Index m = y.size();
    if (link.is_identity()) return 0.5 * (y - theta).squaredNorm() / static_cast<double>(m);
    double total = 0.0;
    for (Index i = 0; i < m; ++i)
        total += link.G_star(y[i]) + link.G(theta[i]) - theta[i] * y[i];
    if (!std::isfinite(total)) throw NumericError("non-finite loss under link " + link.name);
    return total / static_cast<double>(m);
}

double offset_loss(const Matrix& A, Index j, const RegressionSetting& setting,
                   const TimeSeriesPanel& panel, const LinkSpec& link) {
    if (A.rows() != setting.rows() || A.cols() != setting.cols())
        throw ShapeError("coefficient matrix shape does not match setting");
    const Design d = build_design(setting, panel, j);
    return bregman_loss(A * d.x, d.y, link);
}

Vector residual(const Matrix& A, Index j, const RegressionSetting& setting,
                const TimeSeriesPanel& panel, const LinkSpec& link) {
    if (A.rows() != setting.rows() || A.cols() != setting.cols())
        throw ShapeError("coefficient matrix shape does not match setting");
    const Design d = build_design(setting, panel, j);
    Vector theta = A * d.x;
    if (!theta.allFinite()) throw NumericError("non-finite linear predictor");
    return theta.unaryExpr(link.g) - d.y;
}

Matrix offset_loss_gradient(const Matrix& A, Index j, const RegressionSetting& setting,
                            const TimeSeriesPanel& panel, const LinkSpec& link) {
    const Design d = build_design(setting, panel, j);
    const Vector r = residual(A, j, setting, panel, link);
    return ((r * d.x.transpose()) / static_cast<double>(setting.rows())).cwiseProduct(setting.mask());
}

}  // namespace tvnet
