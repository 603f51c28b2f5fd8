#include "svem/casestudy.hpp"

#include <cstring>

#include "svem/csv.hpp"
#include "svem/engine.hpp"
#include "svem/error.hpp"
#include "svem/evaluation.hpp"
#include "svem/selectors.hpp"

namespace svem {

namespace {

// pH, %DO, induction temperature, feed rate, induction OD600, titer (mg/L)
constexpr double kDsd[15][6] = {
    {0, 1, 1, -1, -1, 156.20},  {0, -1, -1, 1, 1, 318.45}, {1, 0, -1, -1, 1, 398.00},
    {-1, 0, 1, 1, -1, 285.60},  {1, -1, 0, 1, -1, 229.00}, {-1, 1, 0, -1, 1, 377.00},
    {1, -1, 1, 0, 1, 290.00},   {-1, 1, -1, 0, -1, 123.00}, {1, 1, 1, 1, 0, 299.00},
    {-1, -1, -1, -1, 0, 428.00}, {0, 0, 0, 0, 0, 327.80},  {0, 0, 0, 0, 0, 339.74},
    {0, 0, 0, 0, 0, 387.35},    {0, 0, 0, 0, 0, 393.97},   {0, 0, 0, 0, 0, 348.08},
};

constexpr double kCcd[31][6] = {
    {1, 1, -1, 1, -1, 581.36},   {-1, -1, -1, 1, -1, 519.80}, {-1, 1, -1, -1, -1, 115.40},
    {-1, 1, -1, 1, 1, 407.22},   {1, 1, -1, -1, 1, 56.18},    {1, -1, 1, 1, -1, 260.82},
    {-1, -1, -1, -1, 1, 94.95},  {1, -1, -1, -1, -1, 215.03}, {-1, 1, 1, -1, 1, 211.00},
    {0, 0, 0, 0, 0, 321.00},     {0, 0, 0, 0, 0, 387.35},     {-1, 1, 1, 1, -1, 231.00},
    {1, 1, 1, 1, 1, 351.00},     {1, -1, -1, 1, 1, 284.00},   {-1, -1, 1, 1, 1, 298.00},
    {-1, -1, 1, -1, -1, 191.00}, {1, -1, 1, -1, 1, 183.02},   {0, 0, 0, 0, 0, 368.74},
    {1, 1, 1, -1, -1, 111.46},   {0, 0, 0, 0, 0, 391.74},     {0, 0, 0, 0, 0, 366.01},
    {1.3, 0, 0, 0, 0, 257.88},   {-1.3, 0, 0, 0, 0, 295.68},  {0, 1.3, 0, 0, 0, 385.54},
    {0, -1.3, 0, 0, 0, 371.02},  {0, 0, 1.3, 0, 0, 326.70},   {0, 0, -1.3, 0, 0, 251.76},
    {0, 0, 0, 1.3, 0, 351.11},   {0, 0, 0, -1.3, 0, 167.39},  {0, 0, 0, 0, 1.3, 219.64},
    {0, 0, 0, 0, -1.3, 239.29},
};

template <std::size_t Rows>
void fill(const double (&table)[Rows][6], DesignKind kind, const std::vector<std::string>& names, Design& d,
          Eigen::VectorXd& titer) {
    d.kind = kind;
    d.factors = names;
    d.runs.resize(Rows, 5);
    titer.resize(Rows);
    for (std::size_t r = 0; r < Rows; ++r) {
        for (std::size_t c = 0; c < 5; ++c) d.runs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = table[r][c];
        titer[static_cast<Eigen::Index>(r)] = table[r][5];
    }
}

CaseStudyDataset build() {
    CaseStudyDataset data;
    data.factor_names = {"pH", "%DO", "Induction Temperature", "Feed Rate", "Induction OD600"};
    fill(kDsd, DesignKind::DSD, data.factor_names, data.dsd, data.dsd_titer);
    fill(kCcd, DesignKind::CCD, data.factor_names, data.ccd, data.ccd_titer);
    return data;
}

void mix(std::uint64_t& h, double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001B3ULL;
    }
}

}  // namespace

const CaseStudyDataset& load_case_study() {
    static const CaseStudyDataset data = build();
    return data;
}

std::uint64_t dataset_checksum(const CaseStudyDataset& data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const auto* m : {&data.dsd.runs, &data.ccd.runs})
        for (Eigen::Index i = 0; i < m->size(); ++i) mix(h, m->data()[i]);
    for (const auto* v : {&data.dsd_titer, &data.ccd_titer})
        for (Eigen::Index i = 0; i < v->size(); ++i) mix(h, (*v)[i]);
    return h;
}

std::string to_string(CaseStudyMethod m) {
    switch (m) {
        case CaseStudyMethod::SvemForward: return "svem-fwd";
        case CaseStudyMethod::SvemLasso: return "svem-lasso";
        case CaseStudyMethod::LassoBic: return "lasso-bic";
    }
    return "svem-fwd";
}

CaseStudyMethod parse_case_study_method(const std::string& text) {
    if (text == "svem-fwd") return CaseStudyMethod::SvemForward;
    if (text == "svem-lasso") return CaseStudyMethod::SvemLasso;
    if (text == "lasso-bic") return CaseStudyMethod::LassoBic;
    throw InvalidArgumentError("unknown case-study method '" + text + "' (expected svem-fwd, svem-lasso or lasso-bic)");
}

CaseStudyReport run_case_study(CaseStudyMethod method, int n_boot, std::uint64_t seed, int threads) {
    const CaseStudyDataset& data = load_case_study();
    const ModelMatrix m = expand_full_quadratic(data.dsd);

    CaseStudyReport r;
    r.method = method;
    SelectorSpec spec;
    switch (method) {
        case CaseStudyMethod::SvemForward:
            spec.kind = SelectorKind::Forward;
            r.beta = svem_fit(m, data.dsd_titer, spec, n_boot, seed, threads).beta;
            break;
        case CaseStudyMethod::SvemLasso:
            spec.kind = SelectorKind::Lasso;
            r.beta = svem_fit(m, data.dsd_titer, spec, n_boot, seed, threads).beta;
            break;
        case CaseStudyMethod::LassoBic:
            spec.kind = SelectorKind::Lasso;
            spec.criterion = Criterion::BIC;
            r.beta = single_shot_fit(m.values, data.dsd_titer, spec).beta;
            break;
    }

    r.dsd_pred = m.values * r.beta;
    r.ccd_pred = predict_full_quadratic(r.beta, data.ccd);
    r.rmspe_dsd = rmspe(data.dsd_titer, r.dsd_pred);
    r.rmspe_ccd = rmspe(data.ccd_titer, r.ccd_pred);
    r.r2_ccd = r_squared(data.ccd_titer, r.ccd_pred);
    return r;
}

std::string case_study_table_csv(const CaseStudyReport& r) {
    const std::string cells[] = {to_string(r.method), csv::format_number(r.rmspe_dsd),
                                 csv::format_number(r.rmspe_ccd), csv::format_number(r.r2_ccd)};
    return "method,rmspe_dsd,rmspe_ccd,r2_ccd\n" + csv::line(cells);
}

std::string case_study_predictions_csv(const CaseStudyReport& r) {
    const CaseStudyDataset& data = load_case_study();
    std::vector<std::string> header = data.factor_names;
    header.push_back("observed");
    header.push_back("predicted");
    std::string out = csv::line(header);
    for (Eigen::Index i = 0; i < data.ccd.run_count(); ++i) {
        std::vector<std::string> cells;
        for (Eigen::Index c = 0; c < data.ccd.factor_count(); ++c) cells.push_back(csv::format_number(data.ccd.runs(i, c)));
        cells.push_back(csv::format_number(data.ccd_titer[i]));
        cells.push_back(csv::format_number(r.ccd_pred[i]));
        out += csv::line(cells);
    }
    return out;
}

}  // namespace svem
