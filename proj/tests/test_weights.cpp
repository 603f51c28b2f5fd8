#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "svem/random.hpp"
#include "svem/weights.hpp"

using namespace svem;

TEST_CASE("closed-form weight pairs") {
    Eigen::VectorXd u(3);
    u << 0.5, 0.25, std::exp(-1.0);
    const WeightPair w = weights_from_uniforms(u);
    CHECK(w.train[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(w.valid[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(w.train[1] == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-15));
    CHECK(w.valid[1] == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(w.valid[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("uniforms at the boundary are clamped") {
    Eigen::VectorXd u(2);
    u << 0.0, 1.0;
    const WeightPair w = weights_from_uniforms(u);
    CHECK(w.u[0] == kUniformClamp);
    CHECK(w.u[1] == 1.0 - kUniformClamp);
    CHECK(std::isfinite(w.valid[0]));
    CHECK(std::isfinite(w.train[1]));
    CHECK(w.valid[0] == doctest::Approx(-std::log(1e-12)));
    CHECK(w.train[0] > 0.0);
}

TEST_CASE("train and valid are oppositely ranked within a draw") {
    Rng rng = make_rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        const WeightPair w = draw_weights(30, rng);
        CHECK((w.train.array() > 0).all());
        CHECK((w.valid.array() > 0).all());
        std::vector<int> idx(30);
        for (int i = 0; i < 30; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return w.u[a] < w.u[b]; });
        for (int i = 1; i < 30; ++i) {
            CHECK(w.train[idx[i]] > w.train[idx[i - 1]]);
            CHECK(w.valid[idx[i]] < w.valid[idx[i - 1]]);
        }
    }
}

TEST_CASE("weight draws are seed-deterministic") {
    Rng a = make_rng(5), b = make_rng(5), c = make_rng(6);
    const auto wa = draw_weights(100, a);
    const auto wb = draw_weights(100, b);
    const auto wc = draw_weights(100, c);
    CHECK(wa.train == wb.train);
    CHECK(wa.valid == wb.valid);
    CHECK(wa.u != wc.u);
}

TEST_CASE("seed derivation separates streams and indices") {
    CHECK(derive_seed(1, Stream::Noise, 0) != derive_seed(1, Stream::Noise, 1));
    CHECK(derive_seed(1, Stream::Noise, 0) != derive_seed(1, Stream::TrueModel, 0));
    CHECK(derive_seed(1, Stream::Noise, 0) != derive_seed(2, Stream::Noise, 0));
    CHECK(derive_seed(1, Stream::Noise, 3) == derive_seed(1, Stream::Noise, 3));
}

TEST_CASE("Laplace draws have unit mean absolute value") {
    Rng rng = make_rng(2024);
    const int n = 400000;
    double abs_sum = 0, sum = 0;
    for (int i = 0; i < n; ++i) {
        const double x = draw_laplace(rng);
        sum += x;
        abs_sum += std::abs(x);
    }
    // Var|X| = 1 for Laplace(0, 1), so the standard error is 1/sqrt(n).
    CHECK(std::abs(abs_sum / n - 1.0) < 5.0 / std::sqrt(double(n)));
    CHECK(std::abs(sum / n) < 5.0 * std::sqrt(2.0 / n));
}
