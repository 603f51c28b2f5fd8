#include "svem/engine.hpp"

#include "svem/error.hpp"
#include "svem/parallel.hpp"

namespace svem {

WeightPair iteration_weights(std::uint64_t seed, std::size_t iteration, Eigen::Index n) {
    Rng rng = make_rng(seed, Stream::BootstrapWeights, iteration);
    return draw_weights(n, rng);
}

Eigen::VectorXd bag(const Eigen::MatrixXd& rows) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) sum += rows.row(r).transpose();
    return rows.rows() > 0 ? Eigen::VectorXd(sum / static_cast<double>(rows.rows())) : sum;
}

Eigen::VectorXd selection_fraction(const Eigen::MatrixXd& rows) {
    if (rows.rows() == 0) return Eigen::VectorXd::Zero(rows.cols());
    return (rows.array() != 0.0).cast<double>().colwise().sum().transpose() / static_cast<double>(rows.rows());
}

SvemModel svem_fit(const ModelMatrix& m, const Eigen::VectorXd& y, const SelectorSpec& spec, int n_boot,
                   std::uint64_t seed, int threads) {
    if (n_boot < 1) throw InvalidArgumentError("nBoot must be at least 1");
    if (spec.criterion != Criterion::AutoValidationSSE)
        throw InvalidArgumentError("SVEM selects by auto-validation SSE; use single_shot_fit for bic/aicc");
    spec.validate();
    if (y.size() != m.values.rows()) throw InvalidDimensionError("response length must match the design runs");
    if (!y.allFinite()) throw InvalidArgumentError("response contains non-finite values");

    const Eigen::MatrixXd& x = m.values;
    Eigen::MatrixXd rows(n_boot, x.cols());
    parallel_for(static_cast<std::size_t>(n_boot), threads, [&](std::size_t i) {
        try {
            const WeightPair w = iteration_weights(seed, i, x.rows());
            const Path path = selector_path(x, y, w.train, w.valid, spec);
            rows.row(static_cast<Eigen::Index>(i)) = select_from_path(path, x, y, w.valid).beta.transpose();
        } catch (const Error& e) {
            throw IterationError(i, e.what());
        }
    });

    SvemModel model;
    model.beta = bag(rows);
    model.selection_fraction = selection_fraction(rows);
    model.selection_fraction[0] = 1.0;
    model.n_boot = n_boot;
    model.selector = spec;
    model.seed = seed;
    model.terms = m.terms;
    model.ensemble.rows = std::move(rows);
    model.ensemble.terms = m.terms;
    return model;
}

Eigen::VectorXd predict_full_quadratic(const Eigen::VectorXd& beta, const Design& d) {
    const int k = static_cast<int>(d.factor_count());
    if (beta.size() != full_quadratic_size(k))
        throw FactorMismatchError("coefficient vector has " + std::to_string(beta.size()) +
                                  " terms; a " + std::to_string(k) + "-factor full quadratic has " +
                                  std::to_string(full_quadratic_size(k)));
    return expand_full_quadratic(d.runs) * beta;
}

Eigen::VectorXd svem_predict(const SvemModel& model, const Design& d) {
    if (d.factor_count() != model.factor_count())
        throw FactorMismatchError("model was trained on " + std::to_string(model.factor_count()) +
                                  " factors but the design has " + std::to_string(d.factor_count()));
    return predict_full_quadratic(model.beta, d);
}

}  // namespace svem
