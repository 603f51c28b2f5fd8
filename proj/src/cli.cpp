#include "svem/cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "svem/casestudy.hpp"
#include "svem/csv.hpp"
#include "svem/designs.hpp"
#include "svem/engine.hpp"
#include "svem/error.hpp"
#include "svem/evaluation.hpp"
#include "svem/simulation.hpp"

namespace svem::cli {

namespace {

namespace fs = std::filesystem;

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-")
        out << content;
    else
        csv::write_file_atomic(path, content);
}

std::string matrix_csv(const std::vector<std::string>& header, const Eigen::MatrixXd& values) {
    std::string text = csv::line(header);
    std::vector<std::string> cells(static_cast<std::size_t>(values.cols()));
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c)
            cells[static_cast<std::size_t>(c)] = csv::format_number(values(r, c));
        text += csv::line(cells);
    }
    return text;
}

struct DesignArgs {
    std::string kind;
    int k = 0;
    int fake_factors = 2;
    std::optional<int> center_runs;
    int runs = 10000;
    std::uint64_t seed = kDefaultSeed;
    bool expanded = false;
    std::string out;
};

int run_design(const DesignArgs& a, std::ostream& out) {
    Design d;
    if (a.kind == "dsd")
        d = make_dsd(a.k, a.fake_factors, a.center_runs.value_or(1));
    else if (a.kind == "bbd")
        d = make_bbd(a.k, a.center_runs);
    else if (a.kind == "sfd")
        d = make_sfd(a.k, a.runs, a.seed);
    else
        throw InvalidArgumentError("unknown design kind '" + a.kind + "' (expected dsd, bbd or sfd)");

    if (a.expanded) {
        const ModelMatrix m = expand_full_quadratic(d);
        emit(a.out, matrix_csv(term_names(m.terms, d.factors), m.values), out);
    } else {
        emit(a.out, matrix_csv(d.factors, d.runs), out);
    }
    return 0;
}

/// Factor columns (everything except the response) and the response column.
struct DataSet {
    Design design;
    std::optional<Eigen::VectorXd> response;
};

DataSet load_data(const csv::Document& doc, const std::string& response, bool response_required) {
    const std::ptrdiff_t resp = doc.column(response);
    if (resp < 0 && response_required)
        throw CsvError(doc.source, 1, doc.header.size() + 1, "missing response column '" + response + "'");
    std::vector<std::size_t> factor_cols;
    DataSet data;
    data.design.kind = DesignKind::Custom;
    for (std::size_t c = 0; c < doc.header.size(); ++c) {
        if (static_cast<std::ptrdiff_t>(c) == resp) continue;
        if (doc.header[c].empty() || doc.header[c].find('*') != std::string::npos || doc.header[c] == "Intercept")
            throw CsvError(doc.source, 1, c + 1, "invalid factor name '" + doc.header[c] + "'");
        factor_cols.push_back(c);
        data.design.factors.push_back(doc.header[c]);
    }
    if (factor_cols.empty()) throw CsvError(doc.source, 1, 1, "no factor columns");
    if (doc.rows.empty()) throw CsvError(doc.source, 2, 1, "no data rows");
    data.design.runs = csv::numeric_columns(doc, factor_cols);
    if (resp >= 0) {
        const std::size_t rc[] = {static_cast<std::size_t>(resp)};
        data.response = csv::numeric_columns(doc, rc).col(0);
    }
    return data;
}

void print_metrics(std::ostream& out, const Eigen::VectorXd& observed, const Eigen::VectorXd& predicted) {
    out << "rmspe=" << csv::format_number(rmspe(observed, predicted)) << '\n';
    const double mean = observed.mean();
    if (observed.size() >= 2 && (observed.array() != mean).any())
        out << "r2=" << csv::format_number(r_squared(observed, predicted)) << '\n';
    out << "n=" << observed.size() << '\n';
}

struct FitArgs {
    std::string data;
    std::string response = "Y";
    std::string selector = "fwd";
    std::string criterion = "autovalid";
    int n_boot = kDefaultBootstraps;
    std::uint64_t seed = kDefaultSeed;
    int lambda_grid = 100;
    double lambda_min_ratio = 1e-4;
    int max_steps = 1000;
    int threads = 1;
    std::string out;
    std::string dump_ensemble;
    std::string dump_weights;
};

int run_fit(const FitArgs& a, std::ostream& out) {
    const DataSet data = load_data(csv::read(a.data), a.response, true);
    const Eigen::VectorXd& y = *data.response;
    const ModelMatrix m = expand_full_quadratic(data.design);

    SelectorSpec spec;
    spec.kind = parse_selector_kind(a.selector);
    spec.criterion = parse_criterion(a.criterion);
    spec.lambda_grid_size = a.lambda_grid;
    spec.lambda_min_ratio = a.lambda_min_ratio;
    spec.max_steps = a.max_steps;
    spec.validate();

    Eigen::VectorXd beta;
    Eigen::VectorXd fraction;
    Eigen::MatrixXd ensemble;
    if (spec.criterion == Criterion::AutoValidationSSE) {
        SvemModel model = svem_fit(m, y, spec, a.n_boot, a.seed, a.threads);
        beta = model.beta;
        fraction = model.selection_fraction;
        ensemble = std::move(model.ensemble.rows);
    } else {
        beta = single_shot_fit(m.values, y, spec).beta;
        fraction = (beta.array() != 0.0).cast<double>();
        fraction[0] = 1.0;
        ensemble = beta.transpose();
    }

    const auto names = term_names(m.terms, data.design.factors);
    std::string coef = "term,estimate,selection_fraction\n";
    for (std::size_t t = 0; t < names.size(); ++t) {
        const auto i = static_cast<Eigen::Index>(t);
        const std::string cells[] = {names[t], csv::format_number(beta[i]), csv::format_number(fraction[i])};
        coef += csv::line(cells);
    }
    csv::write_file_atomic(a.out, coef);

    if (!a.dump_ensemble.empty()) csv::write_file_atomic(a.dump_ensemble, matrix_csv(names, ensemble));

    if (!a.dump_weights.empty()) {
        const WeightPair w = iteration_weights(a.seed, 0, m.values.rows());
        std::vector<std::string> header{"Validation"};
        header.insert(header.end(), data.design.factors.begin(), data.design.factors.end());
        header.push_back(a.response);
        header.push_back("Fractional Wts");
        std::string text = csv::line(header);
        for (const char* label : {"Training", "Auto-Validation"}) {
            const Eigen::VectorXd& wv = std::string(label) == "Training" ? w.train : w.valid;
            for (Eigen::Index r = 0; r < data.design.run_count(); ++r) {
                std::vector<std::string> cells{label};
                for (Eigen::Index c = 0; c < data.design.factor_count(); ++c)
                    cells.push_back(csv::format_number(data.design.runs(r, c)));
                cells.push_back(csv::format_number(y[r]));
                cells.push_back(csv::format_number(wv[r]));
                text += csv::line(cells);
            }
        }
        csv::write_file_atomic(a.dump_weights, text);
    }

    print_metrics(out, y, m.values * beta);
    return 0;
}

struct PredictArgs {
    std::string model;
    std::string design;
    std::string response = "Y";
    std::string out;
};

int run_predict(const PredictArgs& a, std::ostream& out) {
    const csv::Document coef = csv::read(a.model);
    const std::ptrdiff_t term_col = coef.column("term");
    const std::ptrdiff_t est_col = coef.column("estimate");
    if (term_col < 0) throw CsvError(coef.source, 1, coef.header.size() + 1, "missing column 'term'");
    if (est_col < 0) throw CsvError(coef.source, 1, coef.header.size() + 1, "missing column 'estimate'");

    std::vector<std::string> factors;
    for (const auto& row : coef.rows) {
        const std::string& t = row[static_cast<std::size_t>(term_col)];
        if (t != "Intercept" && t.find('*') == std::string::npos) factors.push_back(t);
    }
    const auto expected = term_names(full_quadratic_terms(static_cast<int>(factors.size())), factors);
    if (expected.size() != coef.rows.size())
        throw CsvError(coef.source, coef.rows.empty() ? 1 : coef.lines.back(), static_cast<std::size_t>(term_col) + 1,
                       "expected " + std::to_string(expected.size()) + " full-quadratic terms, found " +
                           std::to_string(coef.rows.size()));
    Eigen::VectorXd beta(static_cast<Eigen::Index>(expected.size()));
    for (std::size_t t = 0; t < expected.size(); ++t) {
        if (coef.rows[t][static_cast<std::size_t>(term_col)] != expected[t])
            throw CsvError(coef.source, coef.lines[t], static_cast<std::size_t>(term_col) + 1,
                           "expected term '" + expected[t] + "'");
        beta[static_cast<Eigen::Index>(t)] = csv::parse_number(coef.rows[t][static_cast<std::size_t>(est_col)],
                                                               coef.source, coef.lines[t],
                                                               static_cast<std::size_t>(est_col) + 1);
    }

    const csv::Document doc = csv::read(a.design);
    std::vector<std::size_t> cols;
    for (const auto& f : factors) {
        const std::ptrdiff_t c = doc.column(f);
        if (c < 0) throw FactorMismatchError(doc.source + ": missing factor column '" + f + "'");
        cols.push_back(static_cast<std::size_t>(c));
    }
    Design d;
    d.factors = factors;
    d.runs = csv::numeric_columns(doc, cols);
    const Eigen::VectorXd pred = predict_full_quadratic(beta, d);

    std::vector<std::string> header = factors;
    header.push_back("Predicted");
    Eigen::MatrixXd table(d.run_count(), d.factor_count() + 1);
    table << d.runs, pred;
    emit(a.out, matrix_csv(header, table), out);

    const std::ptrdiff_t resp = doc.column(a.response);
    if (resp >= 0 && d.run_count() > 0) {
        const std::size_t rc[] = {static_cast<std::size_t>(resp)};
        print_metrics(out, csv::numeric_columns(doc, rc).col(0), pred);
    }
    return 0;
}

struct SimulateArgs {
    std::string config;
    std::string out_dir;
    std::optional<int> threads;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
    SimConfig cfg = parse_sim_config(csv::read_file(a.config));
    if (a.threads) cfg.scenario.threads = *a.threads;
    const SimResult r = run_config(cfg);
    fs::create_directories(a.out_dir);
    csv::write_file_atomic(fs::path(a.out_dir) / "records.csv", records_csv(r));
    csv::write_file_atomic(fs::path(a.out_dir) / "summary.csv", summary_csv(r));
    for (const auto& s : r.summary)
        out << s.method << ".median_log_rmspe=" << csv::format_number(s.log_rmspe.median) << '\n';
    return 0;
}

struct CaseStudyArgs {
    std::string method = "svem-fwd";
    int n_boot = kCaseStudyBootstraps;
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
    std::string out;
    std::string predictions;
};

int run_casestudy(const CaseStudyArgs& a, std::ostream& out) {
    const CaseStudyReport r = run_case_study(parse_case_study_method(a.method), a.n_boot, a.seed, a.threads);
    csv::write_file_atomic(a.out, case_study_table_csv(r));
    if (!a.predictions.empty()) csv::write_file_atomic(a.predictions, case_study_predictions_csv(r));
    out << "rmspe_dsd=" << csv::format_number(r.rmspe_dsd) << '\n'
        << "rmspe_ccd=" << csv::format_number(r.rmspe_ccd) << '\n'
        << "r2_ccd=" << csv::format_number(r.r2_ccd) << '\n';
    return 0;
}

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Self-validated ensemble modeling for designed experiments"};
    app.require_subcommand(1);

    DesignArgs design;
    auto* dcmd = app.add_subcommand("design", "Generate a coded design as CSV");
    dcmd->add_option("--kind", design.kind, "dsd, bbd or sfd")->required();
    dcmd->add_option("--k", design.k, "Number of factors")->required();
    dcmd->add_option("--fake-factors", design.fake_factors, "DSD fake factors");
    dcmd->add_option("--center-runs", design.center_runs, "Center runs (DSD, BBD)");
    dcmd->add_option("--runs", design.runs, "SFD run count");
    dcmd->add_option("--seed", design.seed, "SFD seed");
    dcmd->add_flag("--expanded", design.expanded, "Emit the full-quadratic model matrix");
    dcmd->add_option("--out", design.out, "Output file (default stdout)");

    FitArgs fit;
    auto* fcmd = app.add_subcommand("fit", "Fit a model to a CSV of factors and a response");
    fcmd->add_option("--data", fit.data, "Input CSV")->required();
    fcmd->add_option("--response", fit.response, "Response column name");
    fcmd->add_option("--selector", fit.selector, "fwd, pfwd or lasso");
    fcmd->add_option("--criterion", fit.criterion, "autovalid (SVEM), bic or aicc (single shot)");
    fcmd->add_option("--nboot", fit.n_boot, "Bootstrap iterations");
    fcmd->add_option("--seed", fit.seed, "Master seed");
    fcmd->add_option("--lambda-grid", fit.lambda_grid, "Lasso grid size");
    fcmd->add_option("--lambda-min-ratio", fit.lambda_min_ratio, "Smallest lambda over lambda_max");
    fcmd->add_option("--max-steps", fit.max_steps, "Cap on forward additions");
    fcmd->add_option("--threads", fit.threads, "Worker threads");
    fcmd->add_option("--out", fit.out, "Coefficients CSV")->required();
    fcmd->add_option("--dump-ensemble", fit.dump_ensemble, "Write the nBoot x (P+1) coefficient matrix");
    fcmd->add_option("--dump-weights", fit.dump_weights, "Write iteration 0's fractional weights");

    PredictArgs predict;
    auto* pcmd = app.add_subcommand("predict", "Predict a design from a coefficients CSV");
    pcmd->add_option("--model", predict.model, "Coefficients CSV from fit")->required();
    pcmd->add_option("--design", predict.design, "Design CSV")->required();
    pcmd->add_option("--response", predict.response, "Observed response column, if present");
    pcmd->add_option("--out", predict.out, "Predictions CSV (default stdout)");

    SimulateArgs simulate;
    auto* scmd = app.add_subcommand("simulate", "Run a simulation scenario from a config file");
    scmd->add_option("--config", simulate.config, "key = value config file")->required();
    scmd->add_option("--out-dir", simulate.out_dir, "Directory for records.csv and summary.csv")->required();
    scmd->add_option("--threads", simulate.threads, "Worker threads (overrides config)");

    CaseStudyArgs cs;
    auto* ccmd = app.add_subcommand("casestudy", "Fit the plasmid DSD and score it on the CCD");
    ccmd->add_option("--method", cs.method, "svem-fwd, svem-lasso or lasso-bic");
    ccmd->add_option("--nboot", cs.n_boot, "Bootstrap iterations");
    ccmd->add_option("--seed", cs.seed, "Master seed");
    ccmd->add_option("--threads", cs.threads, "Worker threads");
    ccmd->add_option("--out", cs.out, "Results table CSV")->required();
    ccmd->add_option("--predictions", cs.predictions, "CCD observed vs predicted CSV");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return 2;
    }

    try {
        if (dcmd->parsed()) return run_design(design, out);
        if (fcmd->parsed()) return run_fit(fit, out);
        if (pcmd->parsed()) return run_predict(predict, out);
        if (scmd->parsed()) return run_simulate(simulate, out);
        if (ccmd->parsed()) return run_casestudy(cs, out);
    } catch (const std::exception& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 1;
}

}  // namespace svem::cli
