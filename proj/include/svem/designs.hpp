#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace svem {

enum class DesignKind { DSD, BBD, CCD, SFD, Custom };

std::string to_string(DesignKind kind);

/// Coded experimental design: one row per run, one column per factor.
struct Design {
    DesignKind kind = DesignKind::Custom;
    std::vector<std::string> factors;
    Eigen::MatrixXd runs;

    Eigen::Index run_count() const { return runs.rows(); }
    Eigen::Index factor_count() const { return runs.cols(); }
};

/// X1, X2, ..., Xk
std::vector<std::string> default_factor_names(int k);

/// Orders of the embedded conference matrices.
const std::vector<int>& conference_orders();

/// Embedded m x m conference matrix: zero diagonal, +-1 elsewhere,
/// C^T C = (m - 1) I. Throws UnsupportedOrderError for other orders.
Eigen::MatrixXd conference_matrix(int order);

/// Definitive screening design from the fold-over [C; -C; 0] of the order
/// (k + fake_factors) conference matrix, truncated to the first k columns.
Design make_dsd(int k, int fake_factors = 2, int center_runs = 1);

/// 3 center runs for k <= 4, 6 for k = 5, 3 otherwise.
int default_bbd_center_runs(int k);

/// Box-Behnken design built from all factor pairs: for each pair (i, j) the
/// four (+-1, +-1) runs with every other factor at 0, then the center runs.
Design make_bbd(int k, std::optional<int> center_runs = std::nullopt);

/// n_runs x k matrix of independent Uniform(-1, 1) draws.
Design make_sfd(int k, int n_runs, std::uint64_t seed);

enum class TermKind { Intercept, Main, Quadratic, Interaction };

struct Term {
    TermKind kind = TermKind::Intercept;
    int i = -1;
    int j = -1;

    static Term intercept() { return {TermKind::Intercept, -1, -1}; }
    static Term main(int i) { return {TermKind::Main, i, -1}; }
    static Term quadratic(int i) { return {TermKind::Quadratic, i, -1}; }
    static Term interaction(int i, int j) { return {TermKind::Interaction, i, j}; }

    /// "Intercept", "X1", "X1*X1", "X1*X2"
    std::string name(const std::vector<std::string>& factors) const;

    friend bool operator==(const Term&, const Term&) = default;
};

/// 1 + 2k + k(k - 1)/2
constexpr int full_quadratic_size(int k) { return 1 + 2 * k + k * (k - 1) / 2; }

/// Intercept, mains, quadratics, then interactions (i < j, row-major).
std::vector<Term> full_quadratic_terms(int k);

std::vector<std::string> term_names(const std::vector<Term>& terms,
                                    const std::vector<std::string>& factors);

/// Number of factors implied by a term list (count of main-effect terms).
int factor_count(const std::vector<Term>& terms);

/// Expanded numeric model matrix; column 0 is the intercept.
struct ModelMatrix {
    std::vector<Term> terms;
    Eigen::MatrixXd values;
    DesignKind source_kind = DesignKind::Custom;

    Eigen::Index predictor_count() const { return values.cols() - 1; }
};

/// Full-quadratic expansion of a run matrix in the fixed term order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
expand_full_quadratic(const Eigen::MatrixBase<Derived>& runs) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = runs.rows();
    const Eigen::Index k = runs.cols();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x(n, full_quadratic_size(static_cast<int>(k)));
    x.col(0).setOnes();
    x.middleCols(1, k) = runs;
    x.middleCols(1 + k, k) = runs.array().square().matrix();
    Eigen::Index col = 1 + 2 * k;
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j)
            x.col(col++) = runs.col(i).cwiseProduct(runs.col(j));
    return x;
}

ModelMatrix expand_full_quadratic(const Design& d);

}  // namespace svem
