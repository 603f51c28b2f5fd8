#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "svem/wls.hpp"

namespace svem {

enum class SelectorKind { Forward, PrunedForward, Lasso };

/// How a path point is chosen. AutoValidationSSE drives SVEM; the
/// information criteria drive single-shot baseline fits with unit weights.
enum class Criterion { AutoValidationSSE, BIC, AICc };

std::string to_string(SelectorKind kind);
std::string to_string(Criterion criterion);
SelectorKind parse_selector_kind(const std::string& text);  // fwd | pfwd | lasso
Criterion parse_criterion(const std::string& text);         // autovalid | bic | aicc

struct SelectorSpec {
    SelectorKind kind = SelectorKind::Forward;
    /// Caps the number of forward additions (forward and pruned forward).
    int max_steps = 1000;
    int lambda_grid_size = 100;
    double lambda_min_ratio = 1e-4;
    Criterion criterion = Criterion::AutoValidationSSE;

    /// Throws InvalidArgumentError when a field is out of range.
    void validate() const;
};

using Path = std::vector<WlsFit>;

/// The lasso path with the penalty used at each point.
struct LassoPath {
    std::vector<double> lambdas;
    Path fits;
};

/// Winner of a path scan, densified to the full term list.
struct SelectedModel {
    Eigen::VectorXd beta;
    Eigen::Index support_size = 0;
    double valid_sse = 0.0;
    std::size_t path_index = 0;
};

/// Forward selection on training-weighted SSE. Column 0 of `x` must be the
/// intercept. Starts from intercept-only; each step adds the column with the
/// largest training SSE reduction (lowest index on ties) and stops when every
/// column is in, `max_steps` additions were made, no remaining column keeps
/// the weighted subproblem full rank, or the best reduction is negligible.
Path forward_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w_train,
                  int max_steps = 1000);

/// Forward selection where every addition is followed by backward pruning on
/// the auto-validation weights: the included term (other than the intercept
/// and the one just added) whose removal lowers validation SSE the most is
/// dropped, repeatedly, until no removal helps. Every state is on the path.
Path pruned_forward_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& w_train, const Eigen::VectorXd& w_valid,
                         int max_steps = 1000);

/// Weighted lasso by cyclic coordinate descent on a log-spaced lambda grid.
LassoPath lasso_path_with_lambdas(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w_train, const SelectorSpec& spec);

Path lasso_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w_train,
                const SelectorSpec& spec);

/// Dispatches on spec.kind.
Path selector_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w_train,
                   const Eigen::VectorXd& w_valid, const SelectorSpec& spec);

/// Path point with the smallest validation-weighted SSE; ties go to the
/// smaller support, then the earlier point.
SelectedModel select_from_path(const Path& path, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& w_valid);

/// n ln(SSE/n) + k ln(n) or the AICc analogue; nullopt where undefined
/// (no residual degrees of freedom).
std::optional<double> information_criterion(Criterion criterion, double sse, Eigen::Index n,
                                            Eigen::Index k);

/// One selector run with unit weights, chosen by BIC or AICc.
SelectedModel single_shot_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              const SelectorSpec& spec);

}  // namespace svem
