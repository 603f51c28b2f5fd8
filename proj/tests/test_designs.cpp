#include <doctest.h>

#include <set>

#include "svem/designs.hpp"
#include "svem/error.hpp"

using namespace svem;

TEST_CASE("conference matrices satisfy C^T C = (m - 1) I") {
    for (int m : conference_orders()) {
        const Eigen::MatrixXd c = conference_matrix(m);
        REQUIRE(c.rows() == m);
        // Direct triple loop, independent of Eigen's product kernels.
        for (int a = 0; a < m; ++a) {
            CHECK(c(a, a) == 0.0);
            for (int b = 0; b < m; ++b) {
                double dot = 0;
                for (int r = 0; r < m; ++r) dot += c(r, a) * c(r, b);
                CHECK(dot == (a == b ? m - 1.0 : 0.0));
                if (a != b) CHECK(std::abs(c(a, b)) == 1.0);
            }
        }
    }
    CHECK_THROWS_AS(conference_matrix(7), UnsupportedOrderError);
}

TEST_CASE("DSD run counts and fold-over structure") {
    CHECK(make_dsd(8).run_count() == 21);
    const Design d = make_dsd(4);
    REQUIRE(d.run_count() == 13);
    REQUIRE(d.factor_count() == 4);
    CHECK(d.kind == DesignKind::DSD);
    for (int i = 0; i < 6; ++i) CHECK(d.runs.row(i + 6) == -d.runs.row(i));
    CHECK(d.runs.row(12).isZero());

    CHECK(make_dsd(6, 2, 3).run_count() == 19);
    CHECK(make_dsd(5, 1).run_count() == 13);

    for (int k = 3; k <= 10; ++k) {
        for (int fake : {0, 1, 2}) {
            const int m = k + fake;
            if (m != 6 && m != 8 && m != 10 && m != 12) {
                CHECK_THROWS_AS(make_dsd(k, fake), UnsupportedOrderError);
                continue;
            }
            const Design dsd = make_dsd(k, fake, 2);
            CHECK((dsd.runs.array().abs() == 1.0 || dsd.runs.array() == 0.0).all());
            for (int r = 0; r < m; ++r) {
                CHECK(dsd.runs.row(r + m) == -dsd.runs.row(r));
                CHECK((dsd.runs.row(r).array() == 0.0).count() <= 1);
            }
            CHECK(dsd.runs.bottomRows(2).isZero());
        }
    }
}

TEST_CASE("DSD main effects are orthogonal to quadratic columns") {
    for (auto [k, fake] : {std::pair{4, 2}, {6, 0}, {8, 2}, {10, 2}, {5, 1}, {7, 1}}) {
        const ModelMatrix m = expand_full_quadratic(make_dsd(k, fake));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) CHECK(m.values.col(1 + i).dot(m.values.col(1 + k + j)) == 0.0);
    }
}

TEST_CASE("DSD preconditions") {
    CHECK_THROWS_AS(make_dsd(2), InvalidDimensionError);
    CHECK_THROWS_AS(make_dsd(4, 2, 0), InvalidDimensionError);
}

TEST_CASE("BBD all-pairs construction") {
    const Design d = make_bbd(3, 3);
    REQUIRE(d.run_count() == 15);
    int two_nonzero = 0;
    for (int r = 0; r < d.run_count(); ++r) {
        const auto nz = (d.runs.row(r).array() != 0.0).count();
        if (nz == 2) {
            ++two_nonzero;
            CHECK((d.runs.row(r).array().abs() == 1.0).count() == 2);
        } else {
            CHECK(nz == 0);
        }
    }
    CHECK(two_nonzero == 12);

    CHECK(make_bbd(5).run_count() == 46);
    CHECK(make_bbd(5, 6).run_count() == 46);
    CHECK(make_bbd(4).run_count() == 27);
    CHECK(make_bbd(6).run_count() == 63);
    CHECK(default_bbd_center_runs(3) == 3);
    CHECK(default_bbd_center_runs(5) == 6);
    CHECK(default_bbd_center_runs(7) == 3);

    // Every (pair, sign pattern) appears exactly once.
    const Design b = make_bbd(5);
    std::set<std::vector<double>> seen;
    for (int r = 0; r < b.run_count() - 6; ++r)
        seen.insert({b.runs(r, 0), b.runs(r, 1), b.runs(r, 2), b.runs(r, 3), b.runs(r, 4)});
    CHECK(seen.size() == 40);

    CHECK_THROWS_AS(make_bbd(2), InvalidDimensionError);
}

TEST_CASE("SFD draws are reproducible and bounded") {
    const Design a = make_sfd(4, 10000, 7);
    REQUIRE(a.run_count() == 10000);
    REQUIRE(a.factor_count() == 4);
    CHECK((a.runs.array().abs() <= 1.0).all());
    CHECK(a.runs == make_sfd(4, 10000, 7).runs);
    CHECK(a.runs != make_sfd(4, 10000, 8).runs);

    const Design big = make_sfd(2, 1000000, 11);
    for (int c = 0; c < 2; ++c) {
        const double mean = big.runs.col(c).mean();
        CHECK(mean > -0.005);
        CHECK(mean < 0.005);
    }
    CHECK_THROWS_AS(make_sfd(3, 0, 1), InvalidDimensionError);
}

TEST_CASE("full-quadratic expansion") {
    Design d;
    d.factors = default_factor_names(2);
    d.runs.resize(2, 2);
    d.runs << 1, -1, 0, 0;
    const ModelMatrix m = expand_full_quadratic(d);
    Eigen::RowVectorXd first(6);
    first << 1, 1, -1, 1, 1, -1;
    CHECK(m.values.row(0) == first);
    CHECK(m.values.row(1) == (Eigen::RowVectorXd(6) << 1, 0, 0, 0, 0, 0).finished());
    CHECK(term_names(m.terms, d.factors) ==
          std::vector<std::string>{"Intercept", "X1", "X2", "X1*X1", "X2*X2", "X1*X2"});

    CHECK(expand_full_quadratic(make_dsd(8)).values.cols() == 45);
    CHECK(expand_full_quadratic(make_dsd(8)).predictor_count() == 44);
    CHECK(full_quadratic_size(5) == 21);
    CHECK(factor_count(full_quadratic_terms(6)) == 6);
}

TEST_CASE("expanded columns equal the stated elementwise products") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const int k = 2 + static_cast<int>(seed);
        const Design d = make_sfd(k, 50, seed);
        const ModelMatrix m = expand_full_quadratic(d);
        REQUIRE(static_cast<int>(m.terms.size()) == full_quadratic_size(k));
        CHECK(m.values.col(0).isOnes());
        for (std::size_t t = 0; t < m.terms.size(); ++t) {
            const Term& term = m.terms[t];
            const auto col = m.values.col(static_cast<Eigen::Index>(t));
            switch (term.kind) {
                case TermKind::Intercept: CHECK(t == 0); break;
                case TermKind::Main: CHECK(col == d.runs.col(term.i)); break;
                case TermKind::Quadratic: CHECK(col == d.runs.col(term.i).cwiseProduct(d.runs.col(term.i))); break;
                case TermKind::Interaction:
                    CHECK(term.i < term.j);
                    CHECK(col == d.runs.col(term.i).cwiseProduct(d.runs.col(term.j)));
                    break;
            }
        }
    }
}
