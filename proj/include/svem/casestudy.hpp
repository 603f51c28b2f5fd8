#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "svem/designs.hpp"
#include "svem/random.hpp"

namespace svem {

/// Plasmid fermentation study: a 15-run five-factor DSD for training and an
/// independent 31-run CCD (axials at +-1.3) for testing. Titers in mg/L.
struct CaseStudyDataset {
    std::vector<std::string> factor_names;
    Design dsd;
    Eigen::VectorXd dsd_titer;
    Design ccd;
    Eigen::VectorXd ccd_titer;
};

const CaseStudyDataset& load_case_study();

/// FNV-1a over both tables' numeric content.
std::uint64_t dataset_checksum(const CaseStudyDataset& data);

enum class CaseStudyMethod { SvemForward, SvemLasso, LassoBic };

std::string to_string(CaseStudyMethod m);                  // svem-fwd | svem-lasso | lasso-bic
CaseStudyMethod parse_case_study_method(const std::string& text);

inline constexpr int kCaseStudyBootstraps = 1000;

struct CaseStudyReport {
    CaseStudyMethod method = CaseStudyMethod::SvemForward;
    double rmspe_dsd = 0.0;  ///< in-sample, against observed DSD titers
    double rmspe_ccd = 0.0;
    double r2_ccd = 0.0;
    Eigen::VectorXd beta;
    Eigen::VectorXd dsd_pred;
    Eigen::VectorXd ccd_pred;
};

/// Fits the full quadratic on the DSD and scores it on the CCD.
CaseStudyReport run_case_study(CaseStudyMethod method, int n_boot = kCaseStudyBootstraps,
                               std::uint64_t seed = kDefaultSeed, int threads = 1);

/// method,rmspe_dsd,rmspe_ccd,r2_ccd
std::string case_study_table_csv(const CaseStudyReport& r);

/// One row per CCD run: factors, observed and predicted titer.
std::string case_study_predictions_csv(const CaseStudyReport& r);

}  // namespace svem
