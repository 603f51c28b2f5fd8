#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "svem/designs.hpp"
#include "svem/engine.hpp"
#include "svem/random.hpp"
#include "svem/selectors.hpp"

namespace svem {

enum class Sparsity { All, Medium, High };

std::string to_string(Sparsity s);
Sparsity parse_sparsity(const std::string& text);  // all | medium | high

/// A fitting method: either a single-shot selector chosen by an information
/// criterion, or SVEM around a selector with `n_boot` iterations.
struct MethodSpec {
    std::string name;
    SelectorSpec selector;
    bool svem = false;
    int n_boot = kDefaultBootstraps;
};

/// svem_fwd, svem_pfwd, svem_lasso, {fwd,pfwd,lasso}_{bic,aicc}
MethodSpec parse_method(const std::string& name, int n_boot = kDefaultBootstraps);

/// Dense fitted coefficients for one method on one response vector.
Eigen::VectorXd fit_method(const MethodSpec& method, const ModelMatrix& m, const Eigen::VectorXd& y,
                           std::uint64_t svem_seed, int threads = 1);

struct SimScenario {
    DesignKind design = DesignKind::DSD;
    int k = 4;
    Sparsity sparsity = Sparsity::High;
    int n_reps = 1000;
    double noise_sigma = 1.0;
    std::vector<MethodSpec> methods;
    int sfd_size = 10000;
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;

    void validate() const;
};

struct TrueModel {
    Eigen::VectorXd beta;
    std::vector<Eigen::Index> active;  ///< non-intercept term indices, ascending
};

struct SimRecord {
    int replicate = 0;
    std::string method;
    double rmspe = 0.0;
    double log_rmspe = 0.0;
    Eigen::Index support_size = 0;
};

struct Quantiles {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

struct MethodSummary {
    std::string method;
    Quantiles rmspe;
    Quantiles log_rmspe;
    Quantiles support_size;
};

struct SimResult {
    SimScenario scenario;
    TrueModel truth;
    std::vector<SimRecord> records;  ///< replicate-major, methods in scenario order
    std::vector<MethodSummary> summary;
    std::uint64_t true_response_checksum = 0;
};

/// DSD with the default fake factors and one center run, or the all-pairs BBD.
Design scenario_design(const SimScenario& s);

/// All: P. Medium/High: floor(0.5 (N - 1)) / floor(0.25 (N - 1)) for DSDs,
/// floor(0.5 P) / floor(0.25 P) for BBDs.
int active_effect_count(DesignKind design, Sparsity sparsity, Eigen::Index n_runs, Eigen::Index p);

/// Active terms uniformly without replacement (no heredity); the intercept
/// and the active coefficients are Laplace(0, 1), everything else exactly 0.
TrueModel gen_true_model(const SimScenario& s, Rng& rng);

/// One true model and one scoring SFD per scenario; per replicate, fresh
/// Gaussian noise and every method fitted on the same response vector.
SimResult run_scenario(const SimScenario& s);

/// DSD, all effects active, SVEM forward selection at each nBoot value.
/// Truth, noise and bootstrap weights are shared across nBoot values.
SimResult run_nboot_sweep(int k, const std::vector<int>& n_boot_values, int n_reps, std::uint64_t seed,
                          int threads = 1, int sfd_size = 10000, double noise_sigma = 1.0);

/// min, quartiles (linear interpolation between order statistics), max.
Quantiles quantiles(std::vector<double> values);

std::vector<MethodSummary> summarize(const std::vector<SimRecord>& records,
                                     const std::vector<std::string>& method_order);

/// FNV-1a over the raw bytes.
std::uint64_t checksum(const Eigen::VectorXd& v);

std::string records_csv(const SimResult& r);
std::string summary_csv(const SimResult& r);

/// Plain-text `key = value` configuration of the simulate subcommand.
struct SimConfig {
    SimScenario scenario;
    std::vector<int> nboot_sweep;  ///< non-empty selects the nBoot sweep
};

SimConfig parse_sim_config(std::string_view text);

SimResult run_config(const SimConfig& config);

}  // namespace svem
