#include "svem/evaluation.hpp"

#include <limits>

namespace svem {

EvalReport evaluate_expanded(const Eigen::MatrixXd& expanded, const Eigen::VectorXd& true_response,
                             const Eigen::VectorXd& fit_beta) {
    if (fit_beta.size() != expanded.cols())
        throw InvalidDimensionError("fitted coefficients do not match the expanded term count");
    if (true_response.size() != expanded.rows())
        throw InvalidDimensionError("true response length does not match the scoring design");
    EvalReport report;
    report.rmspe = rmspe(true_response, expanded * fit_beta);
    report.log_rmspe = report.rmspe > 0.0 ? std::log(report.rmspe) : -std::numeric_limits<double>::infinity();
    report.n_points = expanded.rows();
    return report;
}

EvalReport evaluate_on_sfd(const Eigen::VectorXd& true_beta, const Eigen::VectorXd& fit_beta, const Design& sfd) {
    const Eigen::MatrixXd x = expand_full_quadratic(sfd.runs);
    if (true_beta.size() != x.cols())
        throw InvalidDimensionError("true coefficients do not match the expanded term count");
    return evaluate_expanded(x, x * true_beta, fit_beta);
}

}  // namespace svem
