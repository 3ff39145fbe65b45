#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "tokeval/errors.hpp"
#include "tokeval/stats.hpp"

using namespace tokeval;

TEST_CASE("regularized gamma matches closed forms") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> xs(0.0, 30.0);
    for (int iter = 0; iter < 2000; ++iter) {
        const double x = xs(rng);
        // P(1, x) = 1 - exp(-x)
        CHECK(regularized_gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
        // P(1/2, x) = erf(sqrt(x))
        CHECK(regularized_gamma_p(0.5, x) ==
              doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
        // Q(2, x) = (1 + x) exp(-x)
        CHECK(regularized_gamma_q(2.0, x) ==
              doctest::Approx((1.0 + x) * std::exp(-x)).epsilon(1e-12));
    }
}

TEST_CASE("regularized gamma basics") {
    CHECK(regularized_gamma_p(3.0, 0.0) == 0.0);
    CHECK(regularized_gamma_q(3.0, 0.0) == 1.0);
    std::mt19937 rng(32);
    std::uniform_real_distribution<double> as(0.1, 20.0);
    std::uniform_real_distribution<double> xs(0.0, 40.0);
    for (int iter = 0; iter < 2000; ++iter) {
        const double a = as(rng);
        const double x = xs(rng);
        const double p = regularized_gamma_p(a, x);
        const double q = regularized_gamma_q(a, x);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(p + q == doctest::Approx(1.0).epsilon(1e-12));
    }
    // monotone in x
    for (double a : {0.5, 1.0, 4.0}) {
        double prev = 0.0;
        for (double x = 0.0; x < 12.0; x += 0.25) {
            const double p = regularized_gamma_p(a, x);
            CHECK(p >= prev - 1e-15);
            prev = p;
        }
    }
    // series/continued-fraction handoff at x = a + 1 is seamless
    for (double a : {0.5, 1.7, 6.0}) {
        const double below = regularized_gamma_p(a, a + 1.0 - 1e-9);
        const double above = regularized_gamma_p(a, a + 1.0 + 1e-9);
        CHECK(below == doctest::Approx(above).epsilon(1e-7));
    }
    CHECK_THROWS_AS(regularized_gamma_p(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regularized_gamma_p(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regularized_gamma_p(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("chi-square survival function") {
    std::mt19937 rng(33);
    std::uniform_real_distribution<double> xs(0.0, 25.0);
    for (int iter = 0; iter < 1000; ++iter) {
        const double x = xs(rng);
        // 1 dof: erfc(sqrt(x/2));  2 dof: exp(-x/2);  4 dof: (1 + x/2) exp(-x/2)
        CHECK(chi2_survival(x, 1) ==
              doctest::Approx(std::erfc(std::sqrt(x / 2.0))).epsilon(1e-12));
        CHECK(chi2_survival(x, 2) == doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-12));
        CHECK(chi2_survival(x, 4) ==
              doctest::Approx((1.0 + x / 2.0) * std::exp(-x / 2.0)).epsilon(1e-12));
    }
    CHECK(chi2_survival(0.0, 1) == 1.0);
    CHECK(chi2_survival(-3.0, 1) == 1.0);
    CHECK_THROWS_AS(chi2_survival(1.0, 0), std::invalid_argument);
}

TEST_CASE("mcnemar exact binomial") {
    // two-sided tail of Binomial(n = b + c, 1/2)
    const auto r = mcnemar(2, 8, McNemarMethod::ExactBinomial);
    CHECK(r.p_raw == doctest::Approx(0.109375).epsilon(1e-12));
    CHECK(r.statistic == 0.0);
    CHECK(r.b == 2);
    CHECK(r.c == 8);

    const auto swapped = mcnemar(8, 2, McNemarMethod::ExactBinomial);
    CHECK(swapped.p_raw == doctest::Approx(r.p_raw).epsilon(1e-15));

    // 15/5: 2 * sum_{k<=5} C(20,k) / 2^20 = 43400/1048576
    const auto r2 = mcnemar(15, 5, McNemarMethod::ExactBinomial);
    CHECK(r2.p_raw == doctest::Approx(43400.0 / 1048576.0).epsilon(1e-12));

    // the cap at 1 when b == c
    for (uint64_t n : {1, 2, 5, 17}) {
        CHECK(mcnemar(n, n, McNemarMethod::ExactBinomial).p_raw == 1.0);
    }
}

TEST_CASE("mcnemar corrected chi-square") {
    const auto r = mcnemar(15, 5, McNemarMethod::Chi2Corrected);
    CHECK(r.statistic == doctest::Approx(4.05).epsilon(1e-12));
    CHECK(r.p_raw == doctest::Approx(std::erfc(std::sqrt(4.05 / 2.0))).epsilon(1e-12));
    CHECK(r.p_raw == doctest::Approx(0.0442).epsilon(5e-3));

    // continuity correction clamps at zero
    CHECK(mcnemar(3, 3, McNemarMethod::Chi2Corrected).statistic == 0.0);
    CHECK(mcnemar(3, 3, McNemarMethod::Chi2Corrected).p_raw == 1.0);
    CHECK(mcnemar(4, 3, McNemarMethod::Chi2Corrected).statistic == 0.0);
}

TEST_CASE("mcnemar auto selects by discordant count") {
    CHECK(mcnemar(10, 14, McNemarMethod::Auto).method == McNemarMethod::ExactBinomial);
    CHECK(mcnemar(10, 15, McNemarMethod::Auto).method == McNemarMethod::Chi2Corrected);
    CHECK(mcnemar(0, 0, McNemarMethod::Auto).p_raw == 1.0);
    CHECK(mcnemar(0, 0, McNemarMethod::Chi2Corrected).p_raw == 1.0);
    CHECK(mcnemar(0, 0, McNemarMethod::ExactBinomial).p_raw == 1.0);
}

TEST_CASE("mcnemar is symmetric in b and c") {
    std::mt19937 rng(34);
    std::uniform_int_distribution<uint64_t> counts(0, 60);
    for (int iter = 0; iter < 1000; ++iter) {
        const uint64_t b = counts(rng);
        const uint64_t c = counts(rng);
        for (const auto method : {McNemarMethod::Auto, McNemarMethod::Chi2Corrected,
                                  McNemarMethod::ExactBinomial}) {
            const auto ab = mcnemar(b, c, method);
            const auto ba = mcnemar(c, b, method);
            CHECK(ab.p_raw == doctest::Approx(ba.p_raw).epsilon(1e-15));
            CHECK(ab.statistic == doctest::Approx(ba.statistic).epsilon(1e-15));
        }
    }
}

TEST_CASE("equal disagreement is never significant") {
    std::mt19937 rng(35);
    std::uniform_int_distribution<uint64_t> counts(0, 400);
    for (int iter = 0; iter < 1000; ++iter) {
        const uint64_t n = counts(rng);
        CHECK(mcnemar(n, n, McNemarMethod::Auto).p_raw == 1.0);
    }
}

TEST_CASE("mcnemar from paired predictions") {
    PairedPredictions pp;
    pp.gold = {"x", "x", "x", "y", "y", "y"};
    pp.preds_a = {"x", "x", "y", "y", "y", "x"};  // wrong on items 2, 5
    pp.preds_b = {"x", "y", "y", "y", "x", "x"};  // wrong on items 1, 2, 4, 5
    const auto r = mcnemar(pp, McNemarMethod::ExactBinomial);
    // b: A right, B wrong = items {1, 4}; c: A wrong, B right = none
    CHECK(r.b == 2);
    CHECK(r.c == 0);

    PairedPredictions bad = pp;
    bad.preds_b.pop_back();
    CHECK_THROWS_AS(mcnemar(bad), DataError);
    CHECK_THROWS_AS(mcnemar(PairedPredictions{}), DataError);
}

TEST_CASE("bonferroni correction") {
    CHECK(bonferroni(0.01, 3) == doctest::Approx(0.03).epsilon(1e-15));
    CHECK(bonferroni(0.2, 26) == 1.0);
    CHECK(bonferroni(0.5, 1) == 0.5);
    CHECK(bonferroni(0.0, 100) == 0.0);
    CHECK_THROWS_AS(bonferroni(-0.1, 2), std::invalid_argument);

    const auto r = mcnemar(15, 5, McNemarMethod::Chi2Corrected, 26);
    CHECK(r.p_adjusted == doctest::Approx(std::min(1.0, 26 * r.p_raw)).epsilon(1e-15));
}

TEST_CASE("pearson correlation") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson(x, {2.0, 4.0, 6.1}) == doctest::Approx(0.9999008674099175).epsilon(1e-12));
    CHECK(pearson(x, {-1.0, -2.0, -3.0}) == doctest::Approx(-1.0).epsilon(1e-15));

    CHECK_THROWS_AS(pearson(x, {1.0, 2.0}), DataError);
    CHECK_THROWS_AS(pearson({1.0}, {1.0}), DataError);
    CHECK_THROWS_AS(pearson({1.0, 1.0}, {1.0, 2.0}), DataError);  // zero variance
}

TEST_CASE("pearson is invariant under affine maps") {
    std::mt19937 rng(36);
    std::uniform_real_distribution<double> vals(-10.0, 10.0);
    for (int iter = 0; iter < 300; ++iter) {
        std::vector<double> x(12), y(12);
        for (size_t i = 0; i < x.size(); ++i) {
            x[i] = vals(rng);
            y[i] = vals(rng);
        }
        const double base = pearson(x, y);
        std::vector<double> xs(x.size()), ys(y.size());
        const double a = 2.5, bshift = -7.0, c = 0.3, d = 11.0;
        for (size_t i = 0; i < x.size(); ++i) {
            xs[i] = a * x[i] + bshift;
            ys[i] = c * y[i] + d;
        }
        CHECK(pearson(xs, ys) == doctest::Approx(base).epsilon(1e-12));
        // flipping one side flips the sign
        for (double& v : xs) v = -v;
        CHECK(pearson(xs, ys) == doctest::Approx(-base).epsilon(1e-12));
    }
}

TEST_CASE("method names round-trip") {
    CHECK(mcnemar_method_from_name("auto") == McNemarMethod::Auto);
    CHECK(mcnemar_method_from_name("chi2_corrected") == McNemarMethod::Chi2Corrected);
    CHECK(mcnemar_method_from_name("exact_binomial") == McNemarMethod::ExactBinomial);
    CHECK(mcnemar_method_name(McNemarMethod::Auto) == "auto");
    CHECK(mcnemar_method_name(McNemarMethod::Chi2Corrected) == "chi2_corrected");
    CHECK(mcnemar_method_name(McNemarMethod::ExactBinomial) == "exact_binomial");
    CHECK_THROWS_AS(mcnemar_method_from_name("fisher"), UsageError);
}
