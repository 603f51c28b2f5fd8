#include "svem/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "svem/csv.hpp"
#include "svem/error.hpp"
#include "svem/evaluation.hpp"
#include "svem/parallel.hpp"

namespace svem {

std::string to_string(Sparsity s) {
    switch (s) {
        case Sparsity::All: return "all";
        case Sparsity::Medium: return "medium";
        case Sparsity::High: return "high";
    }
    return "all";
}

Sparsity parse_sparsity(const std::string& text) {
    if (text == "all") return Sparsity::All;
    if (text == "medium") return Sparsity::Medium;
    if (text == "high") return Sparsity::High;
    throw InvalidArgumentError("unknown sparsity '" + text + "' (expected all, medium or high)");
}

MethodSpec parse_method(const std::string& name, int n_boot) {
    MethodSpec m;
    m.name = name;
    m.n_boot = n_boot;
    std::string rest = name;
    if (rest.rfind("svem_", 0) == 0) {
        m.svem = true;
        m.selector.kind = parse_selector_kind(rest.substr(5));
        m.selector.criterion = Criterion::AutoValidationSSE;
        return m;
    }
    const auto cut = rest.rfind('_');
    if (cut == std::string::npos)
        throw InvalidArgumentError("unknown method '" + name + "' (expected svem_<sel> or <sel>_<bic|aicc>)");
    m.selector.kind = parse_selector_kind(rest.substr(0, cut));
    m.selector.criterion = parse_criterion(rest.substr(cut + 1));
    if (m.selector.criterion == Criterion::AutoValidationSSE)
        throw InvalidArgumentError("single-shot method '" + name + "' needs bic or aicc");
    return m;
}

Eigen::VectorXd fit_method(const MethodSpec& method, const ModelMatrix& m, const Eigen::VectorXd& y,
                           std::uint64_t svem_seed, int threads) {
    if (method.svem) return svem_fit(m, y, method.selector, method.n_boot, svem_seed, threads).beta;
    return single_shot_fit(m.values, y, method.selector).beta;
}

void SimScenario::validate() const {
    if (design != DesignKind::DSD && design != DesignKind::BBD)
        throw InvalidArgumentError("simulation design must be dsd or bbd");
    if (n_reps < 1) throw InvalidArgumentError("nreps must be at least 1");
    if (!(noise_sigma > 0.0)) throw InvalidArgumentError("noise sigma must be positive");
    if (sfd_size < 1) throw InvalidArgumentError("sfd_size must be at least 1");
    if (methods.empty()) throw InvalidArgumentError("at least one method is required");
}

Design scenario_design(const SimScenario& s) {
    return s.design == DesignKind::DSD ? make_dsd(s.k) : make_bbd(s.k);
}

int active_effect_count(DesignKind design, Sparsity sparsity, Eigen::Index n_runs, Eigen::Index p) {
    if (sparsity == Sparsity::All) return static_cast<int>(p);
    const double fraction = sparsity == Sparsity::Medium ? 0.5 : 0.25;
    const auto base = design == DesignKind::DSD ? static_cast<double>(n_runs - 1) : static_cast<double>(p);
    return static_cast<int>(std::floor(fraction * base));
}

TrueModel gen_true_model(const SimScenario& s, Rng& rng) {
    const Design d = scenario_design(s);
    const Eigen::Index p = full_quadratic_size(s.k) - 1;
    const int count = active_effect_count(s.design, s.sparsity, d.run_count(), p);
    if (count < 1)
        throw DegenerateScenarioError("scenario has " + std::to_string(count) + " active effects");

    std::vector<Eigen::Index> pool(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) pool[static_cast<std::size_t>(j)] = j + 1;
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), pool.size() - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
    }

    TrueModel t;
    t.active.assign(pool.begin(), pool.begin() + count);
    std::sort(t.active.begin(), t.active.end());
    t.beta = Eigen::VectorXd::Zero(p + 1);
    t.beta[0] = draw_laplace(rng);
    for (Eigen::Index j : t.active) t.beta[j] = draw_laplace(rng);
    return t;
}

std::uint64_t checksum(const Eigen::VectorXd& v) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v[i], sizeof(double));
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 0x100000001B3ULL;
        }
    }
    return h;
}

SimResult run_scenario(const SimScenario& s) {
    s.validate();
    const Design d = scenario_design(s);
    const ModelMatrix m = expand_full_quadratic(d);

    SimResult result;
    result.scenario = s;
    Rng truth_rng = make_rng(s.seed, Stream::TrueModel);
    result.truth = gen_true_model(s, truth_rng);

    const Design sfd = make_sfd(s.k, s.sfd_size, derive_seed(s.seed, Stream::SpaceFilling));
    const Eigen::MatrixXd scoring = expand_full_quadratic(sfd.runs);
    const Eigen::VectorXd true_surface = scoring * result.truth.beta;
    result.true_response_checksum = checksum(true_surface);

    const Eigen::VectorXd signal = m.values * result.truth.beta;
    const std::size_t n_methods = s.methods.size();
    result.records.resize(static_cast<std::size_t>(s.n_reps) * n_methods);

    parallel_for(static_cast<std::size_t>(s.n_reps), s.threads, [&](std::size_t rep) {
        Rng noise_rng = make_rng(s.seed, Stream::Noise, rep);
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd y = signal;
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += s.noise_sigma * normal(noise_rng);
        const std::uint64_t svem_seed = derive_seed(s.seed, Stream::Svem, rep);

        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            const MethodSpec& method = s.methods[mi];
            Eigen::VectorXd beta;
            try {
                beta = fit_method(method, m, y, svem_seed);
            } catch (const Error& e) {
                throw ReplicateError(rep, method.name, e.what());
            }
            const EvalReport report = evaluate_expanded(scoring, true_surface, beta);
            SimRecord& rec = result.records[rep * n_methods + mi];
            rec.replicate = static_cast<int>(rep);
            rec.method = method.name;
            rec.rmspe = report.rmspe;
            rec.log_rmspe = report.log_rmspe;
            rec.support_size = (beta.tail(beta.size() - 1).array() != 0.0).count();
        }
    });

    std::vector<std::string> order;
    for (const auto& method : s.methods) order.push_back(method.name);
    result.summary = summarize(result.records, order);
    return result;
}

SimResult run_nboot_sweep(int k, const std::vector<int>& n_boot_values, int n_reps, std::uint64_t seed,
                          int threads, int sfd_size, double noise_sigma) {
    if (n_boot_values.empty()) throw InvalidArgumentError("nBoot sweep needs at least one value");
    SimScenario s;
    s.design = DesignKind::DSD;
    s.k = k;
    s.sparsity = Sparsity::All;
    s.n_reps = n_reps;
    s.noise_sigma = noise_sigma;
    s.sfd_size = sfd_size;
    s.seed = seed;
    s.threads = threads;
    for (int b : n_boot_values) {
        MethodSpec m = parse_method("svem_fwd", b);
        m.name = "svem_fwd_nboot" + std::to_string(b);
        s.methods.push_back(m);
    }
    return run_scenario(s);
}

Quantiles quantiles(std::vector<double> values) {
    if (values.empty()) throw InvalidArgumentError("quantiles of an empty sample");
    std::sort(values.begin(), values.end());
    auto at = [&](double prob) {
        const double pos = prob * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        if (frac == 0.0) return values[lo];
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    return {values.front(), at(0.25), at(0.5), at(0.75), values.back()};
}

std::vector<MethodSummary> summarize(const std::vector<SimRecord>& records,
                                     const std::vector<std::string>& method_order) {
    std::vector<MethodSummary> out;
    for (const auto& name : method_order) {
        std::vector<double> r, lr, ss;
        for (const auto& rec : records)
            if (rec.method == name) {
                r.push_back(rec.rmspe);
                lr.push_back(rec.log_rmspe);
                ss.push_back(static_cast<double>(rec.support_size));
            }
        if (r.empty()) continue;
        out.push_back({name, quantiles(r), quantiles(lr), quantiles(ss)});
    }
    return out;
}

std::string records_csv(const SimResult& r) {
    std::string out = "replicate,method,rmspe,log_rmspe,support_size\n";
    for (const auto& rec : r.records) {
        const std::string cells[] = {std::to_string(rec.replicate), rec.method, csv::format_number(rec.rmspe),
                                     csv::format_number(rec.log_rmspe), std::to_string(rec.support_size)};
        out += csv::line(cells);
    }
    return out;
}

std::string summary_csv(const SimResult& r) {
    std::string out = "method,metric,min,q1,median,q3,max\n";
    auto row = [&](const std::string& method, const char* metric, const Quantiles& q) {
        const std::string cells[] = {method,
                                     metric,
                                     csv::format_number(q.min),
                                     csv::format_number(q.q1),
                                     csv::format_number(q.median),
                                     csv::format_number(q.q3),
                                     csv::format_number(q.max)};
        out += csv::line(cells);
    };
    for (const auto& s : r.summary) {
        row(s.method, "rmspe", s.rmspe);
        row(s.method, "log_rmspe", s.log_rmspe);
        row(s.method, "support_size", s.support_size);
    }
    return out;
}

namespace {

std::string trim_copy(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim_copy(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

long long parse_integer(const std::string& key, const std::string& value, std::size_t line) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size())
        throw InvalidArgumentError("config line " + std::to_string(line) + ": " + key + " expects an integer, got '" +
                                   value + "'");
    return v;
}

}  // namespace

SimConfig parse_sim_config(std::string_view text) {
    SimConfig cfg;
    SimScenario& s = cfg.scenario;
    std::vector<std::string> method_names{"svem_fwd", "fwd_bic"};
    int n_boot = kDefaultBootstraps;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string content = trim_copy(raw);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw InvalidArgumentError("config line " + std::to_string(line) + ": expected key = value");
        const std::string key = trim_copy(content.substr(0, eq));
        const std::string value = trim_copy(content.substr(eq + 1));

        if (key == "design") {
            if (value == "dsd") s.design = DesignKind::DSD;
            else if (value == "bbd") s.design = DesignKind::BBD;
            else throw InvalidArgumentError("config line " + std::to_string(line) + ": design must be dsd or bbd");
        } else if (key == "k") {
            s.k = static_cast<int>(parse_integer(key, value, line));
        } else if (key == "sparsity") {
            s.sparsity = parse_sparsity(value);
        } else if (key == "nreps") {
            s.n_reps = static_cast<int>(parse_integer(key, value, line));
        } else if (key == "methods") {
            method_names = split_list(value);
        } else if (key == "nboot") {
            n_boot = static_cast<int>(parse_integer(key, value, line));
        } else if (key == "sfd_size") {
            s.sfd_size = static_cast<int>(parse_integer(key, value, line));
        } else if (key == "seed") {
            s.seed = static_cast<std::uint64_t>(parse_integer(key, value, line));
        } else if (key == "noise_sigma") {
            const double v = csv::parse_number(value, "config", line, eq + 2);
            s.noise_sigma = v;
        } else if (key == "threads") {
            s.threads = static_cast<int>(parse_integer(key, value, line));
        } else if (key == "nboot_sweep") {
            cfg.nboot_sweep.clear();
            for (const auto& item : split_list(value))
                cfg.nboot_sweep.push_back(static_cast<int>(parse_integer(key, item, line)));
        } else {
            throw InvalidArgumentError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }

    s.methods.clear();
    for (const auto& name : method_names) s.methods.push_back(parse_method(name, n_boot));
    return cfg;
}

SimResult run_config(const SimConfig& config) {
    const SimScenario& s = config.scenario;
    if (!config.nboot_sweep.empty())
        return run_nboot_sweep(s.k, config.nboot_sweep, s.n_reps, s.seed, s.threads, s.sfd_size, s.noise_sigma);
    return run_scenario(s);
}

}  // namespace svem
