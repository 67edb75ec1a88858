#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "plap/criteria.hpp"
#include "plap/errors.hpp"

using namespace plap;

TEST_CASE("critical exponent") {
    CHECK(critical_exponent(2.0, 3) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(critical_exponent(1.5, 2) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK_THROWS_AS(critical_exponent(2.0, 2), NotDefinedError);
    CHECK_THROWS_AS(critical_exponent(1.0, 2), std::invalid_argument);
}

TEST_CASE("coefficient closed form") {
    // c(p, q*, 0) = 0 identically.
    for (double p : {1.1, 1.3, 1.5, 1.7, 1.9})
        CHECK(std::abs(coefficient(p, critical_exponent(p, 2), 0.0)) <= 1e-12);

    CHECK(coefficient(1.5, 10.0, 0.0) == doctest::Approx(-2.0 / 15.0).epsilon(1e-14));
    CHECK(coefficient(1.5, 10.0, 0.5) == doctest::Approx(49.0 / 30.0).epsilon(1e-14));

    CHECK_THROWS_AS(coefficient(1.5, 10.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(coefficient(1.5, 10.0, -0.1), std::invalid_argument);
}

TEST_CASE("threshold closed form and bisection agree") {
    CHECK(s_bar(1.5, 10.0) == doctest::Approx(4.0 / 57.0).epsilon(1e-14));
    CHECK(std::abs(s_bar(1.5, 10.0) - s_bar_bisect(1.5, 10.0)) <= 1e-10);

    // Large-q limit (2-p)/3.
    CHECK(std::abs(s_bar(1.5, 1e9) - 1.0 / 6.0) <= 1e-6);

    CHECK_THROWS_AS(s_bar(1.5, 6.0), NoWindowError);   // q = q* exactly
    CHECK_THROWS_AS(s_bar(1.5, 4.0), NoWindowError);
    CHECK_THROWS_AS(s_bar(2.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(s_bar_bisect(1.5, 6.0), NoWindowError);
}

TEST_CASE("threshold properties on a grid") {
    for (int i = 0; i < 10; ++i) {
        const double p = 1.05 + 0.09 * i;
        const double q_star = critical_exponent(p, 2);
        double prev = 0.0;
        for (int j = 0; j < 10; ++j) {
            const double q = q_star + 0.1 + 10.0 * j;
            const double root = s_bar(p, q);
            CHECK(root > 0.0);
            CHECK(root < 1.0);
            CHECK(std::abs(coefficient(p, q, root)) <= 1e-10);
            CHECK(coefficient(p, q, root / 2.0) < 0.0);
            CHECK(coefficient(p, q, (1.0 + root) / 2.0) > 0.0);
            CHECK(std::abs(root - s_bar_bisect(p, q)) <= 1e-10);
            CHECK(root > prev); // strictly increasing in q
            prev = root;
        }
    }
}

TEST_CASE("growth condition") {
    const std::vector<double> samples{-2.0, -1.0, 0.0, 1.0, 2.0};

    CHECK(check_growth_condition(PowerLaw{10.0}, 10.0, samples).holds);
    // Power law with larger exponent than requested still satisfies it.
    CHECK(check_growth_condition(PowerLaw{12.0}, 10.0, samples).holds);

    const GrowthCheck constant = check_growth_condition(Constant{1.0}, 10.0, samples);
    CHECK_FALSE(constant.holds);
    CHECK(constant.first_violation_t.has_value());

    const std::vector<double> with_one{-1.0, 0.0, 1.0};
    const GrowthCheck mismatched = check_growth_condition(PowerLaw{10.0}, 12.0, with_one);
    CHECK_FALSE(mismatched.holds);
    CHECK(*mismatched.first_violation_t == doctest::Approx(-1.0)); // first sample checked

    CHECK_THROWS_AS(
        check_growth_condition(PowerLaw{10.0}, 10.0, std::vector<double>{}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        check_growth_condition(PowerLaw{10.0}, 10.0, std::vector<double>{0.0, 1.0}),
        std::invalid_argument);
}

TEST_CASE("certificate verdicts") {
    const CertificateVerdict yes = certificate(1.5, 10.0, 0.05, 3.0, PowerLaw{10.0});
    CHECK(yes.verdict == Verdict::NoNontrivialSolution);
    CHECK(yes.s_bar.has_value());
    CHECK(*yes.s_bar == doctest::Approx(4.0 / 57.0).epsilon(1e-14));
    CHECK(yes.coefficient.has_value());
    CHECK(*yes.coefficient < 0.0);

    const CertificateVerdict s_too_big = certificate(1.5, 10.0, 0.08, 3.0, PowerLaw{10.0});
    CHECK(s_too_big.verdict == Verdict::Inconclusive);

    const CertificateVerdict p_out = certificate(2.0, 10.0, 0.01, 1.0, PowerLaw{10.0});
    CHECK(p_out.verdict == Verdict::Inconclusive);

    const CertificateVerdict q_crit = certificate(1.5, 6.0, 0.01, 1.0, PowerLaw{6.0});
    CHECK(q_crit.verdict == Verdict::Inconclusive);

    const CertificateVerdict alpha_out = certificate(1.5, 10.0, 0.05, 3.5, PowerLaw{10.0});
    CHECK(alpha_out.verdict == Verdict::Inconclusive);

    const CertificateVerdict wrong_f = certificate(1.5, 10.0, 0.05, 3.0, Constant{1.0});
    CHECK(wrong_f.verdict == Verdict::Inconclusive);

    // Every inconclusive certificate names at least one failed hypothesis.
    for (const CertificateVerdict* cv :
         {&s_too_big, &p_out, &q_crit, &alpha_out, &wrong_f}) {
        bool any_failed = false;
        for (const auto& reason : cv->reasons)
            any_failed |= reason.rfind("failed:", 0) == 0;
        CHECK(any_failed);
    }
}

TEST_CASE("certificate soundness on a parameter sweep") {
    for (int i = 0; i < 8; ++i) {
        const double p = 1.1 + 0.1 * i;
        for (double q : {7.0, 10.0, 25.0}) {
            for (double s : {0.01, 0.05, 0.1, 0.3}) {
                const CertificateVerdict cv = certificate(p, q, s, 1.0, PowerLaw{q});
                if (cv.verdict == Verdict::NoNontrivialSolution) {
                    REQUIRE(cv.coefficient.has_value());
                    CHECK(*cv.coefficient < 0.0);
                    REQUIRE(cv.s_bar.has_value());
                    CHECK(s < *cv.s_bar);
                }
            }
        }
    }
}

TEST_CASE("sweep tables") {
    const double p[] = {1.5};
    const double q[] = {10.0};
    const double s[] = {0.05};
    const auto rows = sweep(p, q, s);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].q_critical == doctest::Approx(6.0));
    CHECK(rows[0].coefficient < 0.0);
    REQUIRE(rows[0].s_bar.has_value());
    CHECK(*rows[0].s_bar == doctest::Approx(4.0 / 57.0));
    CHECK(rows[0].verdict == Verdict::NoNontrivialSolution);

    // At the critical exponent the window is empty everywhere.
    const double p2[] = {1.2, 1.5, 1.8};
    const double s2[] = {0.01, 0.1};
    for (double pv : p2) {
        const double qc[] = {critical_exponent(pv, 2)};
        const double pp[] = {pv};
        for (const auto& row : sweep(pp, qc, s2)) {
            CHECK(row.verdict == Verdict::Inconclusive);
            CHECK_FALSE(row.s_bar.has_value());
        }
    }

    CHECK(sweep({}, {}, {}).empty());

    // p-major, then q, then s ordering.
    const double pg[] = {1.3, 1.6};
    const double qg[] = {8.0, 12.0};
    const double sg[] = {0.01, 0.02};
    const auto grid = sweep(pg, qg, sg);
    REQUIRE(grid.size() == 8);
    CHECK(grid[0].p == 1.3);
    CHECK(grid[0].q == 8.0);
    CHECK(grid[0].s == 0.01);
    CHECK(grid[1].s == 0.02);
    CHECK(grid[2].q == 12.0);
    CHECK(grid[4].p == 1.6);
}
