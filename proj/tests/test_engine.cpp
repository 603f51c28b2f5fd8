#include <doctest.h>

#include "svem/designs.hpp"
#include "svem/engine.hpp"
#include "svem/error.hpp"
#include "svem/random.hpp"

using namespace svem;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd noisy_response(const MatrixXd& x, Rng& rng) {
    std::normal_distribution<double> z;
    VectorXd y = 3.0 + 2.0 * x.col(1).array() - 1.5 * x.col(3).array();
    for (auto& v : y) v += 0.5 * z(rng);
    return y;
}

}  // namespace

TEST_CASE("a single bootstrap is the selector run on iteration-0 weights") {
    const ModelMatrix m = expand_full_quadratic(make_dsd(4));
    Rng rng = make_rng(1);
    const VectorXd y = noisy_response(m.values, rng);
    for (SelectorKind kind : {SelectorKind::Forward, SelectorKind::PrunedForward, SelectorKind::Lasso}) {
        SelectorSpec spec;
        spec.kind = kind;
        const SvemModel model = svem_fit(m, y, spec, 1, 42);
        const WeightPair w = iteration_weights(42, 0, m.values.rows());
        const SelectedModel direct =
            select_from_path(selector_path(m.values, y, w.train, w.valid, spec), m.values, y, w.valid);
        CHECK(model.beta == direct.beta);
        CHECK(model.ensemble.rows.rows() == 1);
    }
}

TEST_CASE("bagged coefficients are the ensemble column means") {
    const ModelMatrix m = expand_full_quadratic(make_dsd(6, 0));
    Rng rng = make_rng(2);
    const VectorXd y = noisy_response(m.values, rng);
    const SvemModel model = svem_fit(m, y, SelectorSpec{}, 50, 7);
    REQUIRE(model.ensemble.rows.rows() == 50);
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
        long double s = 0;
        int nonzero = 0;
        for (Eigen::Index r = 0; r < 50; ++r) {
            s += model.ensemble.rows(r, c);
            nonzero += model.ensemble.rows(r, c) != 0.0;
        }
        CHECK(std::abs(model.beta[c] - double(s / 50)) < 1e-12);
        if (c > 0) CHECK(model.selection_fraction[c] == doctest::Approx(nonzero / 50.0));
    }
    CHECK(model.selection_fraction[0] == 1.0);
    CHECK(model.terms == m.terms);
    CHECK(model.factor_count() == 6);
}

TEST_CASE("results do not depend on the thread count") {
    const ModelMatrix m = expand_full_quadratic(make_dsd(8));
    Rng rng = make_rng(3);
    const VectorXd y = noisy_response(m.values, rng);
    for (SelectorKind kind : {SelectorKind::Forward, SelectorKind::Lasso}) {
        SelectorSpec spec;
        spec.kind = kind;
        const SvemModel one = svem_fit(m, y, spec, 40, 11, 1);
        const SvemModel four = svem_fit(m, y, spec, 40, 11, 4);
        CHECK(one.beta == four.beta);
        CHECK(one.ensemble.rows == four.ensemble.rows);
        CHECK(svem_fit(m, y, spec, 40, 12, 1).beta != one.beta);
    }
}

TEST_CASE("bagged prediction is the mean of member predictions") {
    const ModelMatrix m = expand_full_quadratic(make_dsd(4));
    Rng rng = make_rng(4);
    const VectorXd y = noisy_response(m.values, rng);
    const SvemModel model = svem_fit(m, y, SelectorSpec{}, 30, 5);
    const Design grid = make_sfd(4, 500, 9);
    const VectorXd bagged = svem_predict(model, grid);
    VectorXd members = VectorXd::Zero(500);
    for (Eigen::Index r = 0; r < 30; ++r)
        members += predict_full_quadratic(model.ensemble.rows.row(r).transpose(), grid);
    members /= 30.0;
    CHECK((bagged - members).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("prediction uses the fixed term order") {
    VectorXd beta(6);
    beta << 1, 2, 3, 4, 5, 6;  // 1 + 2a + 3b + 4a^2 + 5b^2 + 6ab
    Design d;
    d.runs.resize(2, 2);
    d.runs << 0.5, -1, 0, 2;
    const VectorXd p = predict_full_quadratic(beta, d);
    CHECK(p[0] == doctest::Approx(1 + 1 - 3 + 1 + 5 - 3));
    CHECK(p[1] == doctest::Approx(1 + 6 + 20));

    SvemModel model;
    model.beta = beta;
    model.terms = full_quadratic_terms(2);
    CHECK_THROWS_AS(svem_predict(model, make_sfd(3, 4, 1)), FactorMismatchError);
    CHECK_THROWS_AS(predict_full_quadratic(beta, make_sfd(3, 4, 1)), FactorMismatchError);
}

TEST_CASE("constant response gives an intercept-only ensemble") {
    const ModelMatrix m = expand_full_quadratic(make_dsd(4));
    const SvemModel model = svem_fit(m, VectorXd::Constant(m.values.rows(), -2.5), SelectorSpec{}, 10, 1);
    CHECK(model.beta[0] == doctest::Approx(-2.5).epsilon(1e-12));
    CHECK(model.beta.tail(model.beta.size() - 1).isZero());
}

TEST_CASE("svem_fit argument checks") {
    const ModelMatrix m = expand_full_quadratic(make_dsd(4));
    VectorXd y = VectorXd::Ones(m.values.rows());
    SelectorSpec bic;
    bic.criterion = Criterion::BIC;
    CHECK_THROWS_AS(svem_fit(m, y, bic, 5), InvalidArgumentError);
    CHECK_THROWS_AS(svem_fit(m, y, SelectorSpec{}, 0), InvalidArgumentError);
    CHECK_THROWS_AS(svem_fit(m, VectorXd::Ones(3), SelectorSpec{}, 5), InvalidDimensionError);
    y[2] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(svem_fit(m, y, SelectorSpec{}, 5), InvalidArgumentError);
}
