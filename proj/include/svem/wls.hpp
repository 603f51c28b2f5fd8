#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace svem {

/// Pivots below this fraction of the largest pivot are treated as zero.
inline constexpr double kPivotTolerance = 1e-10;

/// Weighted least-squares fit on a subset of model-matrix columns.
struct WlsFit {
    std::vector<Eigen::Index> support;  ///< column indices, ascending
    Eigen::VectorXd beta;               ///< one coefficient per support entry
    double train_sse = 0.0;
    Eigen::Index rank = 0;

    /// Non-intercept support entries with a nonzero coefficient.
    Eigen::Index active_count() const;

    /// Length-`cols` coefficient vector with zeros off the support.
    Eigen::VectorXd dense(Eigen::Index cols) const;
};

/// Minimizes sum_i w[i] (y[i] - x[i]^T beta)^2 over the columns of `x` listed
/// in `support` using a column-pivoted QR of diag(sqrt(w)) X. Directions whose
/// pivot falls under kPivotTolerance get zero coefficients.
WlsFit wls_fit(const Eigen::MatrixXd& x, std::span<const Eigen::Index> support,
               const Eigen::VectorXd& y, const Eigen::VectorXd& w);

/// Fit on every column of `x`.
WlsFit wls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w);

template <typename XD, typename YD, typename WD, typename BD>
typename XD::Scalar weighted_sse(const Eigen::MatrixBase<XD>& x, const Eigen::MatrixBase<YD>& y,
                                 const Eigen::MatrixBase<WD>& w, const Eigen::MatrixBase<BD>& beta) {
    return (w.array() * (y - x * beta).array().square()).sum();
}

/// Weighted SSE of a fit evaluated with an arbitrary weight vector.
double weighted_sse(const Eigen::MatrixXd& x, const WlsFit& fit, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& w);

}  // namespace svem
