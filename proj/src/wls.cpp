#include "svem/wls.hpp"

#include <cmath>
#include <numeric>

#include "svem/error.hpp"

namespace svem {

Eigen::Index WlsFit::active_count() const {
    Eigen::Index n = 0;
    for (std::size_t s = 0; s < support.size(); ++s)
        if (support[s] != 0 && beta[static_cast<Eigen::Index>(s)] != 0.0) ++n;
    return n;
}

Eigen::VectorXd WlsFit::dense(Eigen::Index cols) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(cols);
    for (std::size_t s = 0; s < support.size(); ++s) out[support[s]] = beta[static_cast<Eigen::Index>(s)];
    return out;
}

WlsFit wls_fit(const Eigen::MatrixXd& x, std::span<const Eigen::Index> support, const Eigen::VectorXd& y,
               const Eigen::VectorXd& w) {
    const Eigen::Index n = x.rows();
    if (y.size() != n || w.size() != n)
        throw InvalidDimensionError("wls_fit: response and weight lengths must match the row count");
    if ((w.array() < 0.0).any()) throw InvalidArgumentError("wls_fit: weights must be non-negative");
    if (!(w.array() > 0.0).any()) throw DegenerateWeightsError();

    const auto p = static_cast<Eigen::Index>(support.size());
    const Eigen::VectorXd sw = w.cwiseSqrt();
    Eigen::MatrixXd a(n, p);
    for (Eigen::Index c = 0; c < p; ++c) {
        if (support[c] < 0 || support[c] >= x.cols())
            throw InvalidDimensionError("wls_fit: support index out of range");
        a.col(c) = sw.cwiseProduct(x.col(support[c]));
    }

    WlsFit fit;
    fit.support.assign(support.begin(), support.end());
    fit.beta = Eigen::VectorXd::Zero(p);

    if (p > 0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        const Eigen::MatrixXd& r = qr.matrixR();
        const Eigen::Index diag = std::min(n, p);
        const double largest = diag > 0 ? std::abs(r(0, 0)) : 0.0;
        Eigen::Index rank = 0;
        while (rank < diag && largest > 0.0 && std::abs(r(rank, rank)) > kPivotTolerance * largest) ++rank;
        fit.rank = rank;

        if (rank > 0) {
            Eigen::VectorXd qtb = sw.cwiseProduct(y);
            qtb.applyOnTheLeft(qr.householderQ().transpose());
            const Eigen::VectorXd z = r.topLeftCorner(rank, rank)
                                          .triangularView<Eigen::Upper>()
                                          .solve(qtb.head(rank));
            Eigen::VectorXd permuted = Eigen::VectorXd::Zero(p);
            permuted.head(rank) = z;
            fit.beta = qr.colsPermutation() * permuted;
        }
    }

    Eigen::VectorXd fitted = Eigen::VectorXd::Zero(n);
    for (Eigen::Index c = 0; c < p; ++c) fitted += fit.beta[c] * x.col(support[c]);
    fit.train_sse = (w.array() * (y - fitted).array().square()).sum();
    return fit;
}

WlsFit wls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(x.cols()));
    std::iota(all.begin(), all.end(), Eigen::Index{0});
    return wls_fit(x, all, y, w);
}

double weighted_sse(const Eigen::MatrixXd& x, const WlsFit& fit, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& w) {
    Eigen::VectorXd fitted = Eigen::VectorXd::Zero(x.rows());
    for (std::size_t s = 0; s < fit.support.size(); ++s)
        fitted += fit.beta[static_cast<Eigen::Index>(s)] * x.col(fit.support[s]);
    return (w.array() * (y - fitted).array().square()).sum();
}

}  // namespace svem
