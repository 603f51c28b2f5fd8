#pragma once

#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "svem/designs.hpp"
#include "svem/error.hpp"

namespace svem {

struct EvalReport {
    double rmspe = 0.0;
    double log_rmspe = 0.0;  ///< natural log; -inf when rmspe is 0
    std::optional<double> r2;
    Eigen::Index n_points = 0;
};

/// sqrt(mean((truth - pred)^2))
template <typename TD, typename PD>
typename TD::Scalar rmspe(const Eigen::MatrixBase<TD>& truth, const Eigen::MatrixBase<PD>& pred) {
    if (truth.size() != pred.size()) throw InvalidDimensionError("rmspe: length mismatch");
    if (truth.size() < 1) throw InvalidDimensionError("rmspe: empty input");
    using std::sqrt;
    return sqrt((truth - pred).squaredNorm() / static_cast<typename TD::Scalar>(truth.size()));
}

/// 1 - SSE / SST. Not clamped below, so poor models go negative.
template <typename OD, typename PD>
typename OD::Scalar r_squared(const Eigen::MatrixBase<OD>& observed, const Eigen::MatrixBase<PD>& pred) {
    using Scalar = typename OD::Scalar;
    if (observed.size() != pred.size()) throw InvalidDimensionError("r_squared: length mismatch");
    if (observed.size() < 2) throw InvalidDimensionError("r_squared: needs at least two points");
    const Scalar mean = observed.mean();
    const Scalar sst = (observed.array() - mean).square().sum();
    if (!(sst > Scalar(0))) throw DegenerateVarianceError();
    return Scalar(1) - (observed - pred).squaredNorm() / sst;
}

/// Noise-free comparison of two coefficient vectors over an already
/// expanded scoring matrix.
EvalReport evaluate_expanded(const Eigen::MatrixXd& expanded, const Eigen::VectorXd& true_response,
                             const Eigen::VectorXd& fit_beta);

/// Expands `sfd`, evaluates both surfaces and returns the RMSPE between them.
EvalReport evaluate_on_sfd(const Eigen::VectorXd& true_beta, const Eigen::VectorXd& fit_beta, const Design& sfd);

}  // namespace svem
