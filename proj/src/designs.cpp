#include "svem/designs.hpp"

#include <array>
#include <random>

#include "svem/error.hpp"
#include "svem/random.hpp"

namespace svem {

namespace {

// Paley conference matrices (GF(5), GF(7), GF(9), GF(11)); the first row and
// column are bordered so every row has its single zero on the diagonal.
constexpr int kConf6[6][6] = {
    {0, 1, 1, 1, 1, 1},   {1, 0, 1, -1, -1, 1}, {1, 1, 0, 1, -1, -1},
    {1, -1, 1, 0, 1, -1}, {1, -1, -1, 1, 0, 1}, {1, 1, -1, -1, 1, 0},
};

constexpr int kConf8[8][8] = {
    {0, 1, 1, 1, 1, 1, 1, 1},      {-1, 0, -1, -1, 1, -1, 1, 1}, {-1, 1, 0, -1, -1, 1, -1, 1},
    {-1, 1, 1, 0, -1, -1, 1, -1},  {-1, -1, 1, 1, 0, -1, -1, 1}, {-1, 1, -1, 1, 1, 0, -1, -1},
    {-1, -1, 1, -1, 1, 1, 0, -1},  {-1, -1, -1, 1, -1, 1, 1, 0},
};

constexpr int kConf10[10][10] = {
    {0, 1, 1, 1, 1, 1, 1, 1, 1, 1},      {1, 0, 1, 1, 1, -1, -1, 1, -1, -1},
    {1, 1, 0, 1, -1, 1, -1, -1, 1, -1},  {1, 1, 1, 0, -1, -1, 1, -1, -1, 1},
    {1, 1, -1, -1, 0, 1, 1, 1, -1, -1},  {1, -1, 1, -1, 1, 0, 1, -1, 1, -1},
    {1, -1, -1, 1, 1, 1, 0, -1, -1, 1},  {1, 1, -1, -1, 1, -1, -1, 0, 1, 1},
    {1, -1, 1, -1, -1, 1, -1, 1, 0, 1},  {1, -1, -1, 1, -1, -1, 1, 1, 1, 0},
};

constexpr int kConf12[12][12] = {
    {0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},       {-1, 0, -1, 1, -1, -1, -1, 1, 1, 1, -1, 1},
    {-1, 1, 0, -1, 1, -1, -1, -1, 1, 1, 1, -1}, {-1, -1, 1, 0, -1, 1, -1, -1, -1, 1, 1, 1},
    {-1, 1, -1, 1, 0, -1, 1, -1, -1, -1, 1, 1}, {-1, 1, 1, -1, 1, 0, -1, 1, -1, -1, -1, 1},
    {-1, 1, 1, 1, -1, 1, 0, -1, 1, -1, -1, -1}, {-1, -1, 1, 1, 1, -1, 1, 0, -1, 1, -1, -1},
    {-1, -1, -1, 1, 1, 1, -1, 1, 0, -1, 1, -1}, {-1, -1, -1, -1, 1, 1, 1, -1, 1, 0, -1, 1},
    {-1, 1, -1, -1, -1, 1, 1, 1, -1, 1, 0, -1}, {-1, -1, 1, -1, -1, -1, 1, 1, 1, -1, 1, 0},
};

template <std::size_t M>
Eigen::MatrixXd to_matrix(const int (&c)[M][M]) {
    Eigen::MatrixXd out(M, M);
    for (std::size_t r = 0; r < M; ++r)
        for (std::size_t s = 0; s < M; ++s) out(r, s) = c[r][s];
    return out;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidDimensionError(what);
}

}  // namespace

std::string to_string(DesignKind kind) {
    switch (kind) {
        case DesignKind::DSD: return "DSD";
        case DesignKind::BBD: return "BBD";
        case DesignKind::CCD: return "CCD";
        case DesignKind::SFD: return "SFD";
        case DesignKind::Custom: return "Custom";
    }
    return "Custom";
}

std::vector<std::string> default_factor_names(int k) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(std::max(k, 0)));
    for (int i = 1; i <= k; ++i) names.push_back("X" + std::to_string(i));
    return names;
}

const std::vector<int>& conference_orders() {
    static const std::vector<int> orders{6, 8, 10, 12};
    return orders;
}

Eigen::MatrixXd conference_matrix(int order) {
    switch (order) {
        case 6: return to_matrix(kConf6);
        case 8: return to_matrix(kConf8);
        case 10: return to_matrix(kConf10);
        case 12: return to_matrix(kConf12);
        default: throw UnsupportedOrderError(order);
    }
}

Design make_dsd(int k, int fake_factors, int center_runs) {
    require(k >= 3, "a definitive screening design needs at least 3 factors");
    require(fake_factors >= 0, "fake factor count must be non-negative");
    require(center_runs >= 1, "a definitive screening design needs at least one center run");

    const int m = k + fake_factors;
    const Eigen::MatrixXd c = conference_matrix(m).leftCols(k);

    Design d;
    d.kind = DesignKind::DSD;
    d.factors = default_factor_names(k);
    d.runs = Eigen::MatrixXd::Zero(2 * m + center_runs, k);
    d.runs.topRows(m) = c;
    d.runs.middleRows(m, m) = -c;
    return d;
}

int default_bbd_center_runs(int k) { return k == 5 ? 6 : 3; }

Design make_bbd(int k, std::optional<int> center_runs) {
    require(k >= 3, "a Box-Behnken design needs at least 3 factors");
    const int centers = center_runs.value_or(default_bbd_center_runs(k));
    require(centers >= 1, "a Box-Behnken design needs at least one center run");

    const int pairs = k * (k - 1) / 2;
    Design d;
    d.kind = DesignKind::BBD;
    d.factors = default_factor_names(k);
    d.runs = Eigen::MatrixXd::Zero(4 * pairs + centers, k);

    constexpr std::array<std::array<double, 2>, 4> corners{{{-1, -1}, {1, -1}, {-1, 1}, {1, 1}}};
    Eigen::Index row = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            for (const auto& c : corners) {
                d.runs(row, i) = c[0];
                d.runs(row, j) = c[1];
                ++row;
            }
    return d;
}

Design make_sfd(int k, int n_runs, std::uint64_t seed) {
    require(k >= 1, "a space-filling design needs at least one factor");
    require(n_runs >= 1, "a space-filling design needs at least one run");

    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    Design d;
    d.kind = DesignKind::SFD;
    d.factors = default_factor_names(k);
    d.runs.resize(n_runs, k);
    for (int r = 0; r < n_runs; ++r)
        for (int c = 0; c < k; ++c) d.runs(r, c) = unif(rng);
    return d;
}

std::string Term::name(const std::vector<std::string>& factors) const {
    auto f = [&](int idx) {
        return idx >= 0 && static_cast<std::size_t>(idx) < factors.size() ? factors[idx]
                                                                         : "X" + std::to_string(idx + 1);
    };
    switch (kind) {
        case TermKind::Intercept: return "Intercept";
        case TermKind::Main: return f(i);
        case TermKind::Quadratic: return f(i) + "*" + f(i);
        case TermKind::Interaction: return f(i) + "*" + f(j);
    }
    return {};
}

std::vector<Term> full_quadratic_terms(int k) {
    std::vector<Term> terms;
    terms.reserve(static_cast<std::size_t>(full_quadratic_size(k)));
    terms.push_back(Term::intercept());
    for (int i = 0; i < k; ++i) terms.push_back(Term::main(i));
    for (int i = 0; i < k; ++i) terms.push_back(Term::quadratic(i));
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) terms.push_back(Term::interaction(i, j));
    return terms;
}

std::vector<std::string> term_names(const std::vector<Term>& terms,
                                    const std::vector<std::string>& factors) {
    std::vector<std::string> names;
    names.reserve(terms.size());
    for (const auto& t : terms) names.push_back(t.name(factors));
    return names;
}

int factor_count(const std::vector<Term>& terms) {
    int k = 0;
    for (const auto& t : terms)
        if (t.kind == TermKind::Main) ++k;
    return k;
}

ModelMatrix expand_full_quadratic(const Design& d) {
    require(d.factor_count() >= 1, "cannot expand a design without factors");
    ModelMatrix m;
    m.terms = full_quadratic_terms(static_cast<int>(d.factor_count()));
    m.values = expand_full_quadratic(d.runs);
    m.source_kind = d.kind;
    return m;
}

}  // namespace svem
