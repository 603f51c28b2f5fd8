#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "svem/designs.hpp"
#include "svem/random.hpp"
#include "svem/selectors.hpp"
#include "svem/weights.hpp"

namespace svem {

inline constexpr int kDefaultBootstraps = 200;

/// One dense coefficient row per bootstrap iteration; unselected terms are 0.
struct EnsembleMatrix {
    Eigen::MatrixXd rows;
    std::vector<Term> terms;
};

/// Bagged self-validated ensemble model.
struct SvemModel {
    Eigen::VectorXd beta;
    Eigen::VectorXd selection_fraction;
    int n_boot = 0;
    SelectorSpec selector;
    std::uint64_t seed = kDefaultSeed;
    std::vector<Term> terms;
    EnsembleMatrix ensemble;

    int factor_count() const { return svem::factor_count(terms); }
};

/// Weights used by bootstrap iteration `iteration` of a fit seeded with `seed`.
WeightPair iteration_weights(std::uint64_t seed, std::size_t iteration, Eigen::Index n);

/// Runs `n_boot` fractional-weight iterations of the selector, each choosing
/// its path point by auto-validation SSE, and bags the dense coefficient rows
/// by column mean. Iteration i always draws from substream i of `seed`, so the
/// result is bit-identical for any thread count.
SvemModel svem_fit(const ModelMatrix& m, const Eigen::VectorXd& y, const SelectorSpec& spec,
                   int n_boot = kDefaultBootstraps, std::uint64_t seed = kDefaultSeed, int threads = 1);

/// Column means of the ensemble rows, summed in row order.
Eigen::VectorXd bag(const Eigen::MatrixXd& rows);

/// Share of rows with a nonzero entry, per column.
Eigen::VectorXd selection_fraction(const Eigen::MatrixXd& rows);

/// Full-quadratic prediction for coefficients in the fixed term order.
Eigen::VectorXd predict_full_quadratic(const Eigen::VectorXd& beta, const Design& d);

/// Throws FactorMismatchError when `d` has a different factor count.
Eigen::VectorXd svem_predict(const SvemModel& model, const Design& d);

}  // namespace svem
