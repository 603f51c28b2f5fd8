#include <doctest.h>

#include <vector>

#include "svem/designs.hpp"
#include "svem/error.hpp"
#include "svem/random.hpp"
#include "svem/wls.hpp"

using namespace svem;

namespace {

Eigen::VectorXd exp_weights(Eigen::Index n, Rng& rng) {
    std::exponential_distribution<double> e(1.0);
    Eigen::VectorXd w(n);
    for (auto& v : w) v = e(rng);
    return w;
}

Eigen::MatrixXd normal_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
    std::normal_distribution<double> z;
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = z(rng);
    return m;
}

// Normal equations solved in long double by Gaussian elimination with partial pivoting.
Eigen::VectorXd normal_equations(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
    using L = long double;
    const Eigen::Index p = x.cols();
    std::vector<std::vector<L>> a(p, std::vector<L>(p + 1, 0));
    for (Eigen::Index r = 0; r < x.rows(); ++r)
        for (Eigen::Index i = 0; i < p; ++i) {
            for (Eigen::Index j = 0; j < p; ++j) a[i][j] += L(w[r]) * x(r, i) * x(r, j);
            a[i][p] += L(w[r]) * x(r, i) * y[r];
        }
    for (Eigen::Index c = 0; c < p; ++c) {
        Eigen::Index piv = c;
        for (Eigen::Index r = c + 1; r < p; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        for (Eigen::Index r = 0; r < p; ++r) {
            if (r == c) continue;
            const L f = a[r][c] / a[c][c];
            for (Eigen::Index j = c; j <= p; ++j) a[r][j] -= f * a[c][j];
        }
    }
    Eigen::VectorXd b(p);
    for (Eigen::Index i = 0; i < p; ++i) b[i] = double(a[i][p] / a[i][i]);
    return b;
}

}  // namespace

TEST_CASE("intercept-only fit is the weighted mean") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Ones(3, 1);
    Eigen::VectorXd y(3), w(3);
    y << 1, 2, 6;
    w << 1, 1, 2;
    const WlsFit f = wls_fit(x, y, w);
    CHECK(f.beta[0] == doctest::Approx(3.75).epsilon(1e-14));
    CHECK(f.rank == 1);
    CHECK(f.train_sse == doctest::Approx(1 * 2.75 * 2.75 + 1 * 1.75 * 1.75 + 2 * 2.25 * 2.25));
}

TEST_CASE("exact line is recovered with zero SSE") {
    Eigen::MatrixXd x(4, 2);
    x << 1, 0, 1, 1, 1, 2, 1, 3;
    Eigen::VectorXd y = 2.0 + 3.0 * x.col(1).array();
    Eigen::VectorXd w(4);
    w << 0.3, 1.7, 0.01, 4;
    const WlsFit f = wls_fit(x, y, w);
    CHECK(f.beta[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.beta[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.train_sse < 1e-20);
}

TEST_CASE("WLS matches the normal-equations oracle on random instances") {
    Rng rng = make_rng(314);
    double worst = 0;
    for (int inst = 0; inst < 50; ++inst) {
        const Eigen::Index n = 8 + inst % 13, p = 2 + inst % 5;
        Eigen::MatrixXd x = normal_matrix(n, p, rng);
        x.col(0).setOnes();
        const Eigen::VectorXd y = normal_matrix(n, 1, rng);
        const Eigen::VectorXd w = exp_weights(n, rng);
        const WlsFit f = wls_fit(x, y, w);
        REQUIRE(f.rank == p);
        worst = std::max(worst, (f.beta - normal_equations(x, y, w)).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("weighted_sse examples") {
    Eigen::MatrixXd x(2, 1);
    x << 1, 1;
    Eigen::VectorXd y(2), w(2), b(1);
    y << 1, 3;
    w << 2, 0.5;
    b << 2;
    CHECK(weighted_sse(x, y, w, b) == doctest::Approx(2.5));
    w << 0, 0;
    CHECK(weighted_sse(x, y, w, b) == 0.0);
}

TEST_CASE("degenerate inputs are rejected") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Ones(3, 2);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(3);
    CHECK_THROWS_AS(wls_fit(x, y, Eigen::VectorXd::Zero(3)), DegenerateWeightsError);
    Eigen::VectorXd neg = Eigen::VectorXd::Ones(3);
    neg[1] = -1;
    CHECK_THROWS_AS(wls_fit(x, y, neg), InvalidArgumentError);
    CHECK_THROWS_AS(wls_fit(x, y, Eigen::VectorXd::Ones(2)), InvalidDimensionError);
}

TEST_CASE("weight scaling leaves coefficients unchanged and scales SSE") {
    Rng rng = make_rng(7);
    for (int inst = 0; inst < 10; ++inst) {
        Eigen::MatrixXd x = normal_matrix(15, 4, rng);
        const Eigen::VectorXd y = normal_matrix(15, 1, rng);
        const Eigen::VectorXd w = exp_weights(15, rng);
        const double c = 0.01 + inst * 3.7;
        const WlsFit a = wls_fit(x, y, w), b = wls_fit(x, y, c * w);
        CHECK((a.beta - b.beta).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(b.train_sse == doctest::Approx(c * a.train_sse).epsilon(1e-9));
    }
}

TEST_CASE("residuals are weighted-orthogonal and the fit is locally optimal") {
    Rng rng = make_rng(8);
    std::normal_distribution<double> z;
    for (int inst = 0; inst < 10; ++inst) {
        const Eigen::MatrixXd x = normal_matrix(20, 5, rng);
        const Eigen::VectorXd y = normal_matrix(20, 1, rng);
        const Eigen::VectorXd w = exp_weights(20, rng);
        const WlsFit f = wls_fit(x, y, w);
        const Eigen::VectorXd r = y - x * f.beta;
        const Eigen::VectorXd g = x.transpose() * w.cwiseProduct(r);
        CHECK(g.cwiseAbs().maxCoeff() < 1e-9 * (1 + y.cwiseAbs().maxCoeff()) * x.rows());
        for (int t = 0; t < 5; ++t) {
            Eigen::VectorXd d(5);
            for (auto& v : d) v = 1e-3 * z(rng);
            CHECK(weighted_sse(x, y, w, f.beta + d) >= f.train_sse);
        }
    }
}

TEST_CASE("subset fits and rank deficiency") {
    // Duplicate column: the second copy must get a zero coefficient.
    Eigen::MatrixXd x(5, 3);
    x << 1, 1, 1, 1, 2, 2, 1, 3, 3, 1, 4, 4, 1, 5, 5;
    Eigen::VectorXd y(5);
    y << 1, 3, 2, 5, 4;
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(5);
    const WlsFit f = wls_fit(x, y, w);
    CHECK(f.rank == 2);
    CHECK((f.beta.array() == 0.0).count() == 1);
    const std::vector<Eigen::Index> sub{0, 1};
    const WlsFit g = wls_fit(x, sub, y, w);
    CHECK(g.train_sse == doctest::Approx(f.train_sse).epsilon(1e-12));
    CHECK(g.support == sub);
    const Eigen::VectorXd dense = g.dense(3);
    CHECK(dense[2] == 0.0);
    CHECK(weighted_sse(x, g, y, w) == doctest::Approx(g.train_sse));
    CHECK(g.active_count() == 1);
}

TEST_CASE("supersaturated DSD fit is a least-squares solution") {
    const ModelMatrix m = expand_full_quadratic(make_dsd(4));
    Rng rng = make_rng(11);
    const Eigen::VectorXd y = normal_matrix(m.values.rows(), 1, rng);
    const Eigen::VectorXd w = exp_weights(m.values.rows(), rng);
    const WlsFit f = wls_fit(m.values, y, w);
    CHECK(f.rank < m.values.rows());
    CHECK((f.beta.array() == 0.0).count() >= m.values.cols() - f.rank);
    const Eigen::VectorXd g = m.values.transpose() * w.cwiseProduct(y - m.values * f.beta);
    CHECK(g.cwiseAbs().maxCoeff() < 1e-10);
}
