#include "svem/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "svem/error.hpp"

namespace svem {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Relative SSE reduction below which a forward step is not worth taking.
constexpr double kMinRelativeReduction = 1e-12;
// Residual SS below this fraction of sum(w y^2) counts as an exact fit.
constexpr double kExactFitFraction = 1e-24;

constexpr double kLassoTolerance = 1e-7;
constexpr double kLassoSnap = 1e-10;
constexpr std::size_t kLassoMaxSweeps = 100000;
// Active-set sweeps between attempts at a direct active-set solve.
constexpr std::size_t kNewtonInterval = 100;

void check_inputs(const MatrixXd& x, const VectorXd& y, const VectorXd& w) {
    if (x.cols() < 1) throw InvalidDimensionError("model matrix needs an intercept column");
    if (y.size() != x.rows() || w.size() != x.rows())
        throw InvalidDimensionError("response and weight lengths must match the model matrix rows");
    if ((w.array() < 0.0).any()) throw InvalidArgumentError("weights must be non-negative");
    if (!(w.array() > 0.0).any()) throw DegenerateWeightsError();
}

// Incremental modified Gram-Schmidt over sqrt(w)-scaled columns. Candidate
// columns and the residual are kept orthogonal to the current support so the
// SSE reduction of adding column c is (z_c . r)^2 / |z_c|^2.
class ForwardState {
public:
    ForwardState(const MatrixXd& x, const VectorXd& y, const VectorXd& w)
        : x_(x), sw_(w.cwiseSqrt()) {
        y_scaled_ = sw_.cwiseProduct(y);
        base_ = sw_.asDiagonal() * x;
        norms_ = base_.colwise().norm().transpose();
        exact_fit_ss_ = kExactFitFraction * y_scaled_.squaredNorm();
    }

    void reset(const std::vector<Index>& support) {
        z_ = base_;
        r_ = y_scaled_;
        in_.assign(static_cast<std::size_t>(x_.cols()), false);
        support_.clear();
        for (Index j : support) add(j);
    }

    void add(Index j) {
        const double nz = z_.col(j).norm();
        in_[static_cast<std::size_t>(j)] = true;
        support_.insert(std::upper_bound(support_.begin(), support_.end(), j), j);
        if (nz == 0.0) return;
        const VectorXd q = z_.col(j) / nz;
        r_ -= q * q.dot(r_);
        for (Index c = 0; c < z_.cols(); ++c)
            if (!in_[static_cast<std::size_t>(c)]) z_.col(c) -= q * q.dot(z_.col(c));
        z_.col(j).setZero();
    }

    std::optional<Index> best_addition() const {
        const double rss = r_.squaredNorm();
        if (rss <= exact_fit_ss_) return std::nullopt;
        Index best = -1;
        double best_reduction = -1.0;
        for (Index c = 0; c < z_.cols(); ++c) {
            if (in_[static_cast<std::size_t>(c)]) continue;
            const double nz = z_.col(c).norm();
            if (norms_[c] == 0.0 || nz <= kPivotTolerance * norms_[c]) continue;
            const double proj = z_.col(c).dot(r_) / nz;
            const double reduction = proj * proj;
            if (reduction > best_reduction) {
                best_reduction = reduction;
                best = c;
            }
        }
        if (best < 0 || best_reduction <= kMinRelativeReduction * rss) return std::nullopt;
        return best;
    }

    const std::vector<Index>& support() const { return support_; }

private:
    const MatrixXd& x_;
    VectorXd sw_;
    VectorXd y_scaled_;
    MatrixXd base_;
    VectorXd norms_;
    double exact_fit_ss_ = 0.0;

    MatrixXd z_;
    VectorXd r_;
    std::vector<bool> in_;
    std::vector<Index> support_;
};

std::vector<Index> without(const std::vector<Index>& support, Index drop) {
    std::vector<Index> out;
    out.reserve(support.size());
    for (Index s : support)
        if (s != drop) out.push_back(s);
    return out;
}

double soft_threshold(double z, double lambda) {
    if (z > lambda) return z - lambda;
    if (z < -lambda) return z + lambda;
    return 0.0;
}

// Numerical rank of the weighted columns on a support.
Index weighted_rank(const MatrixXd& x, const std::vector<Index>& support, const VectorXd& sw) {
    if (support.empty()) return 0;
    MatrixXd a(x.rows(), static_cast<Index>(support.size()));
    for (std::size_t c = 0; c < support.size(); ++c)
        a.col(static_cast<Index>(c)) = sw.cwiseProduct(x.col(support[c]));
    Eigen::ColPivHouseholderQR<MatrixXd> qr(a);
    qr.setThreshold(kPivotTolerance);
    return qr.rank();
}

}  // namespace

std::string to_string(SelectorKind kind) {
    switch (kind) {
        case SelectorKind::Forward: return "fwd";
        case SelectorKind::PrunedForward: return "pfwd";
        case SelectorKind::Lasso: return "lasso";
    }
    return "fwd";
}

std::string to_string(Criterion criterion) {
    switch (criterion) {
        case Criterion::AutoValidationSSE: return "autovalid";
        case Criterion::BIC: return "bic";
        case Criterion::AICc: return "aicc";
    }
    return "autovalid";
}

SelectorKind parse_selector_kind(const std::string& text) {
    if (text == "fwd") return SelectorKind::Forward;
    if (text == "pfwd") return SelectorKind::PrunedForward;
    if (text == "lasso") return SelectorKind::Lasso;
    throw InvalidArgumentError("unknown selector '" + text + "' (expected fwd, pfwd or lasso)");
}

Criterion parse_criterion(const std::string& text) {
    if (text == "autovalid") return Criterion::AutoValidationSSE;
    if (text == "bic") return Criterion::BIC;
    if (text == "aicc") return Criterion::AICc;
    throw InvalidArgumentError("unknown criterion '" + text + "' (expected autovalid, bic or aicc)");
}

void SelectorSpec::validate() const {
    if (max_steps < 1) throw InvalidArgumentError("max_steps must be at least 1");
    if (kind == SelectorKind::Lasso) {
        if (lambda_grid_size < 2) throw InvalidArgumentError("lambda grid needs at least 2 points");
        if (!(lambda_min_ratio > 0.0 && lambda_min_ratio < 1.0))
            throw InvalidArgumentError("lambda_min_ratio must lie in (0, 1)");
    }
}

Path forward_path(const MatrixXd& x, const VectorXd& y, const VectorXd& w_train, int max_steps) {
    check_inputs(x, y, w_train);
    ForwardState state(x, y, w_train);
    state.reset({0});

    Path path;
    path.push_back(wls_fit(x, state.support(), y, w_train));
    for (int step = 0; step < max_steps; ++step) {
        const auto next = state.best_addition();
        if (!next) break;
        state.add(*next);
        path.push_back(wls_fit(x, state.support(), y, w_train));
    }
    return path;
}

Path pruned_forward_path(const MatrixXd& x, const VectorXd& y, const VectorXd& w_train,
                         const VectorXd& w_valid, int max_steps) {
    check_inputs(x, y, w_train);
    if (w_valid.size() != x.rows())
        throw InvalidDimensionError("validation weight length must match the model matrix rows");

    ForwardState state(x, y, w_train);
    state.reset({0});

    Path path;
    std::set<std::vector<Index>> visited;
    path.push_back(wls_fit(x, state.support(), y, w_train));
    visited.insert(state.support());

    for (int step = 0; step < max_steps; ++step) {
        const auto added = state.best_addition();
        if (!added) break;
        state.add(*added);
        // Re-entering a visited support would replay the same deterministic cycle.
        if (!visited.insert(state.support()).second) break;
        WlsFit current = wls_fit(x, state.support(), y, w_train);
        path.push_back(current);

        bool pruned = false;
        for (;;) {
            const double current_sse = weighted_sse(x, current, y, w_valid);
            std::optional<WlsFit> best;
            double best_sse = current_sse;
            for (Index s : current.support) {
                if (s == 0 || s == *added) continue;
                WlsFit candidate = wls_fit(x, without(current.support, s), y, w_train);
                const double v = weighted_sse(x, candidate, y, w_valid);
                if (v < best_sse) {
                    best_sse = v;
                    best = std::move(candidate);
                }
            }
            if (!best) break;
            current = std::move(*best);
            visited.insert(current.support);
            path.push_back(current);
            pruned = true;
        }
        if (pruned) state.reset(current.support);
    }
    return path;
}

LassoPath lasso_path_with_lambdas(const MatrixXd& x, const VectorXd& y, const VectorXd& w_train,
                                  const SelectorSpec& spec) {
    check_inputs(x, y, w_train);
    spec.validate();

    const Index n = x.rows();
    const Index p = x.cols();
    const VectorXd& w = w_train;
    const double w_sum = w.sum();

    // Standardize non-intercept columns to weighted mean 0 and variance 1.
    VectorXd mean = VectorXd::Zero(p);
    VectorXd scale = VectorXd::Zero(p);
    MatrixXd xs = MatrixXd::Zero(n, p);
    std::vector<Index> usable;
    for (Index j = 1; j < p; ++j) {
        mean[j] = w.dot(x.col(j)) / w_sum;
        const VectorXd centered = x.col(j).array() - mean[j];
        const double var = w.dot(centered.cwiseProduct(centered)) / w_sum;
        const double range = x.col(j).cwiseAbs().maxCoeff();
        if (var <= 0.0 || std::sqrt(var) <= kPivotTolerance * std::max(range, 1.0)) continue;
        scale[j] = std::sqrt(var);
        xs.col(j) = centered / scale[j];
        usable.push_back(j);
    }

    const double y_mean = w.dot(y) / w_sum;
    VectorXd resid = y.array() - y_mean;

    double lambda_max = 0.0;
    for (Index j : usable) lambda_max = std::max(lambda_max, std::abs(w.dot(xs.col(j).cwiseProduct(resid))));

    const auto grid = static_cast<std::size_t>(spec.lambda_grid_size);
    LassoPath out;
    out.lambdas.resize(grid);
    for (std::size_t g = 0; g < grid; ++g)
        out.lambdas[g] = lambda_max * std::pow(spec.lambda_min_ratio,
                                               static_cast<double>(g) / static_cast<double>(grid - 1));

    // Weighted column norms; each equals w_sum after standardization but is
    // computed directly to absorb rounding.
    VectorXd curvature = VectorXd::Zero(p);
    for (Index j : usable) curvature[j] = w.dot(xs.col(j).cwiseProduct(xs.col(j)));
    // Coordinate changes are measured in gradient units so the stationarity
    // residual of the final sweep stays small regardless of total weight.
    const double change_scale = std::max(1.0, w_sum);

    VectorXd theta = VectorXd::Zero(p);

    auto update = [&](Index j, double lambda) {
        const double g = w.dot(xs.col(j).cwiseProduct(resid)) + curvature[j] * theta[j];
        const double next = soft_threshold(g, lambda) / curvature[j];
        const double delta = next - theta[j];
        if (delta != 0.0) {
            resid -= delta * xs.col(j);
            theta[j] = next;
        }
        return std::abs(delta) * change_scale;
    };

    // Aliased or nearly collinear weighted columns make coordinate descent
    // crawl. Feature-sign search: with the active set and signs fixed the
    // objective is quadratic, so step toward its minimizer, drop the first
    // coefficient that would change sign, admit the worst threshold violator
    // and repeat until the point is stationary.
    const VectorXd centered_y = y.array() - y_mean;
    auto feature_sign_search = [&](double lambda) {
        VectorXd trial = theta;
        std::vector<Index> active;
        std::vector<double> sign;
        for (Index j : usable)
            if (theta[j] != 0.0) active.push_back(j), sign.push_back(theta[j] > 0.0 ? 1.0 : -1.0);
        for (Index pass = 0; pass < 10 * p && !active.empty(); ++pass) {
            const auto a = static_cast<Index>(active.size());
            MatrixXd xa(n, a);
            VectorXd now(a);
            const Eigen::Map<const VectorXd> sg(sign.data(), a);
            for (Index c = 0; c < a; ++c) {
                xa.col(c) = xs.col(active[static_cast<std::size_t>(c)]);
                now[c] = trial[active[static_cast<std::size_t>(c)]];
            }
            const MatrixXd gram = xa.transpose() * w.asDiagonal() * xa;
            const VectorXd rhs = xa.transpose() * w.cwiseProduct(centered_y) - lambda * sg;

            // Aliased active columns: if the sign vector is not orthogonal to
            // the null direction the fixed-sign problem has no stationary
            // point, and sliding along that direction lowers the L1 norm at
            // constant fit until a coefficient reaches zero.
            const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
            const double top = std::max(eig.eigenvalues()[a - 1], std::numeric_limits<double>::min());
            if (eig.eigenvalues()[0] <= kPivotTolerance * top) {
                VectorXd dir = eig.eigenvectors().col(0);
                const double slope = sg.dot(dir);
                if (std::abs(slope) > 1e-9) {
                    if (slope > 0.0) dir = -dir;
                    double step = std::numeric_limits<double>::infinity();
                    Index hit = -1;
                    for (Index c = 0; c < a; ++c) {
                        if (dir[c] * sg[c] >= 0.0) continue;
                        const double t = -now[c] / dir[c];
                        if (t < step) step = t, hit = c;
                    }
                    if (hit < 0 || step <= 0.0) return false;
                    for (Index c = 0; c < a; ++c) trial[active[static_cast<std::size_t>(c)]] = now[c] + step * dir[c];
                    trial[active[static_cast<std::size_t>(hit)]] = 0.0;
                    active.erase(active.begin() + hit);
                    sign.erase(sign.begin() + hit);
                    continue;
                }
            }
            const VectorXd target = Eigen::CompleteOrthogonalDecomposition<MatrixXd>(gram).solve(rhs);
            if (!target.allFinite()) return false;

            // Walk toward the target; the first sign change ends the step.
            double step = 1.0;
            Index hit = -1;
            for (Index c = 0; c < a; ++c) {
                if (target[c] * sg[c] > 0.0) continue;
                const double t = now[c] / (now[c] - target[c]);
                if (t < step) step = t, hit = c;
            }
            for (Index c = 0; c < a; ++c)
                trial[active[static_cast<std::size_t>(c)]] = now[c] + step * (target[c] - now[c]);
            if (hit >= 0) {
                trial[active[static_cast<std::size_t>(hit)]] = 0.0;
                active.erase(active.begin() + hit);
                sign.erase(sign.begin() + hit);
                continue;
            }

            // Sign consistent: admit the worst threshold violator, if any.
            const VectorXd r = centered_y - xa * target;
            Index worst = -1;
            double worst_g = lambda * (1.0 + 1e-12);
            for (Index j : usable) {
                if (trial[j] != 0.0) continue;
                const double g = std::abs(w.dot(xs.col(j).cwiseProduct(r)));
                if (g > worst_g) worst_g = g, worst = j;
            }
            if (worst < 0) {
                theta = trial;
                resid = r;
                return true;
            }
            active.insert(std::upper_bound(active.begin(), active.end(), worst), worst);
            const auto at = std::find(active.begin(), active.end(), worst) - active.begin();
            sign.insert(sign.begin() + at, w.dot(xs.col(worst).cwiseProduct(r)) > 0.0 ? 1.0 : -1.0);
        }
        return false;
    };

    const VectorXd sw = w.cwiseSqrt();
    for (std::size_t g = 0; g < grid; ++g) {
        const double lambda = out.lambdas[g];
        std::size_t sweeps = 0;
        bool converged = false;
        while (!converged) {
            if (++sweeps > kLassoMaxSweeps) throw ConvergenceError(g, kLassoMaxSweeps);
            double full_change = 0.0;
            for (Index j : usable) full_change = std::max(full_change, update(j, lambda));
            if (full_change < kLassoTolerance) {
                converged = true;
                break;
            }
            // Iterate on the active set until it settles, then re-check all.
            for (std::size_t inner = 1;; ++inner) {
                if (++sweeps > kLassoMaxSweeps) throw ConvergenceError(g, kLassoMaxSweeps);
                double active_change = 0.0;
                for (Index j : usable)
                    if (theta[j] != 0.0) active_change = std::max(active_change, update(j, lambda));
                if (active_change < kLassoTolerance) break;
                if (inner % kNewtonInterval == 0 && feature_sign_search(lambda)) break;
            }
        }

        WlsFit fit;
        fit.support.push_back(0);
        std::vector<double> coef{0.0};
        double intercept = y_mean;
        for (Index j : usable) {
            if (std::abs(theta[j]) < kLassoSnap) continue;
            const double b = theta[j] / scale[j];
            intercept -= b * mean[j];
            fit.support.push_back(j);
            coef.push_back(b);
        }
        coef[0] = intercept;
        fit.beta = Eigen::Map<const VectorXd>(coef.data(), static_cast<Index>(coef.size()));
        fit.train_sse = weighted_sse(x, fit, y, w);
        fit.rank = weighted_rank(x, fit.support, sw);
        out.fits.push_back(std::move(fit));
    }
    return out;
}

Path lasso_path(const MatrixXd& x, const VectorXd& y, const VectorXd& w_train, const SelectorSpec& spec) {
    return lasso_path_with_lambdas(x, y, w_train, spec).fits;
}

Path selector_path(const MatrixXd& x, const VectorXd& y, const VectorXd& w_train, const VectorXd& w_valid,
                   const SelectorSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case SelectorKind::Forward: return forward_path(x, y, w_train, spec.max_steps);
        case SelectorKind::PrunedForward: return pruned_forward_path(x, y, w_train, w_valid, spec.max_steps);
        case SelectorKind::Lasso: return lasso_path(x, y, w_train, spec);
    }
    return {};
}

namespace {

SelectedModel pick(const Path& path, const MatrixXd& x, const std::vector<double>& score,
                   const std::vector<bool>& feasible, const std::vector<double>& reported) {
    std::size_t best = path.size();
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (!feasible[i]) continue;
        if (best == path.size() ||
            std::make_tuple(score[i], path[i].active_count()) <
                std::make_tuple(score[best], path[best].active_count()))
            best = i;
    }
    if (best == path.size()) throw CriterionInfeasibleError("no path point has a defined criterion value");
    SelectedModel m;
    m.beta = path[best].dense(x.cols());
    m.support_size = path[best].active_count();
    m.valid_sse = reported[best];
    m.path_index = best;
    return m;
}

}  // namespace

SelectedModel select_from_path(const Path& path, const MatrixXd& x, const VectorXd& y, const VectorXd& w_valid) {
    if (path.empty()) throw InvalidArgumentError("select_from_path: empty path");
    std::vector<double> sse(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) sse[i] = weighted_sse(x, path[i], y, w_valid);
    return pick(path, x, sse, std::vector<bool>(path.size(), true), sse);
}

std::optional<double> information_criterion(Criterion criterion, double sse, Index n, Index k) {
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    switch (criterion) {
        case Criterion::BIC:
            if (n - k <= 0) return std::nullopt;
            return nd * std::log(sse / nd) + kd * std::log(nd);
        case Criterion::AICc:
            if (n - k - 1 <= 0) return std::nullopt;
            return nd * std::log(sse / nd) + 2.0 * kd + 2.0 * kd * (kd + 1.0) / (nd - kd - 1.0);
        case Criterion::AutoValidationSSE: break;
    }
    throw InvalidArgumentError("information_criterion: criterion must be bic or aicc");
}

SelectedModel single_shot_fit(const MatrixXd& x, const VectorXd& y, const SelectorSpec& spec) {
    if (spec.criterion == Criterion::AutoValidationSSE)
        throw InvalidArgumentError("single-shot fits need the bic or aicc criterion");
    const VectorXd ones = VectorXd::Ones(x.rows());
    const Path path = selector_path(x, y, ones, ones, spec);

    std::vector<double> score(path.size(), 0.0);
    std::vector<bool> feasible(path.size(), false);
    std::vector<double> sse(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        sse[i] = path[i].train_sse;
        const auto ic = information_criterion(spec.criterion, sse[i], x.rows(), path[i].active_count() + 1);
        if (ic) {
            score[i] = *ic;
            feasible[i] = true;
        }
    }
    if (path.size() == 1) feasible[0] = true;
    return pick(path, x, score, feasible, sse);
}

}  // namespace svem
