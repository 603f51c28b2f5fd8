#include "svem/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "svem/error.hpp"

namespace svem {

WeightPair weights_from_uniforms(const Eigen::VectorXd& u) {
    WeightPair w;
    w.u = u.unaryExpr([](double x) { return std::clamp(x, kUniformClamp, 1.0 - kUniformClamp); });
    w.train = w.u.unaryExpr([](double x) { return -std::log1p(-x); });
    w.valid = w.u.unaryExpr([](double x) { return -std::log(x); });
    return w;
}

WeightPair draw_weights(Eigen::Index n, Rng& rng) {
    if (n < 1) throw InvalidArgumentError("weight vector length must be at least 1");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = unif(rng);
    return weights_from_uniforms(u);
}

}  // namespace svem
