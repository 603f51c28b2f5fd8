#pragma once

#include <Eigen/Dense>

#include "svem/random.hpp"

namespace svem {

/// Uniform draws are clamped into [eps, 1 - eps] so both logs stay finite.
inline constexpr double kUniformClamp = 1e-12;

/// Paired fractional weights for one bootstrap iteration. Both vectors are
/// Exp(1) marginally; train is increasing and valid decreasing in u.
struct WeightPair {
    Eigen::VectorXd train;
    Eigen::VectorXd valid;
    Eigen::VectorXd u;
};

/// train[i] = -ln(1 - u[i]), valid[i] = -ln(u[i]).
WeightPair weights_from_uniforms(const Eigen::VectorXd& u);

WeightPair draw_weights(Eigen::Index n, Rng& rng);

}  // namespace svem
