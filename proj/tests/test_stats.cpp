#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "coulgas/error.hpp"
#include "coulgas/stats.hpp"
#include "doctest.h"

using namespace coulgas;

namespace {
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
}

TEST_CASE("mean and variance") {
    std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    CHECK(mean(x) == doctest::Approx(2.5));
    CHECK(variance(x) == doctest::Approx(5.0 / 3.0));
    CHECK_THROWS_AS(mean({}), InsufficientDataError);
}

TEST_CASE("batch means recovers the iid standard error") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(3.0, 2.0);
    std::vector<double> x(20000);
    for (double& v : x) v = g(rng);
    BatchMeans bm = batch_means(x);
    CHECK(bm.batches >= 20);
    CHECK(bm.mean == doctest::Approx(3.0).epsilon(0.02));
    CHECK(bm.se == doctest::Approx(2.0 / std::sqrt(20000.0)).epsilon(0.5));
    CHECK_THROWS_AS(batch_means(std::vector<double>(10, 1.0)), InsufficientDataError);
}

TEST_CASE("effective sample size") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> iid(20000);
    for (double& v : iid) v = g(rng);
    double e1 = effective_sample_size(iid);
    CHECK(e1 > 10000.0);
    // AR(1) with rho = 0.9: ESS ~ n (1-rho)/(1+rho) ~ n/19
    std::vector<double> ar(40000);
    double prev = 0.0;
    for (double& v : ar) {
        prev = 0.9 * prev + std::sqrt(1 - 0.81) * g(rng);
        v = prev;
    }
    double e2 = effective_sample_size(ar);
    CHECK(e2 < 6000.0);
    CHECK(e2 > 500.0);
}

TEST_CASE("kolmogorov tail") {
    CHECK(kolmogorov_q(1e9) == doctest::Approx(0.0));
    CHECK(kolmogorov_q(0.0) == doctest::Approx(1.0));
    // classical critical value: Q(1.358) ~ 0.05
    CHECK(kolmogorov_q(1.358) == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("one-sample KS") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(5000);
    for (double& v : x) v = g(rng);
    KsResult r = ks_test(x, normal_cdf);
    CHECK(r.p_value > 0.01);
    // wrong law strongly rejected
    KsResult bad = ks_test(x, [](double t) { return normal_cdf(t - 1.0); });
    CHECK(bad.p_value < 1e-6);
}

TEST_CASE("two-sample KS") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> a(4000), b(4000), c(4000);
    for (double& v : a) v = g(rng);
    for (double& v : b) v = g(rng);
    for (double& v : c) v = g(rng) + 0.5;
    CHECK(ks_test_two(a, b).p_value > 0.01);
    CHECK(ks_test_two(a, c).p_value < 1e-6);
}

TEST_CASE("D'Agostino normality") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(3000);
    for (double& v : x) v = g(rng);
    CHECK(dagostino_k2(x).p_value > 0.01);
    // exponential sample strongly rejected
    std::exponential_distribution<double> e(1.0);
    for (double& v : x) v = e(rng);
    CHECK(dagostino_k2(x).p_value < 1e-6);
}

TEST_CASE("log_mean_exp") {
    std::vector<double> x{0.5, -0.2, 1.0, 0.1, -0.7, 0.3};
    CHECK(log_mean_exp(x, 0.0).value == doctest::Approx(0.0));
    // against direct evaluation
    double s = 0.7, acc = 0.0;
    for (double v : x) acc += std::exp(s * v);
    CHECK(log_mean_exp(x, s).value == doctest::Approx(std::log(acc / x.size())).epsilon(1e-12));
    CHECK(log_mean_exp(x, s).se > 0.0);
    CHECK_THROWS_AS(log_mean_exp({1e308, 1e308, 1.0}, 10.0), std::range_error);
}

TEST_CASE("least squares") {
    // y = 2 a + 3 b - 1 c exactly
    std::vector<double> a{1, 2, 3, 4, 5}, b{0, 1, 0, 1, 2}, c{1, 1, 2, 2, 3};
    std::vector<double> y(5);
    for (int i = 0; i < 5; ++i) y[i] = 2 * a[i] + 3 * b[i] - c[i];
    auto beta = least_squares({a, b, c}, y);
    CHECK(beta[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(beta[1] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(beta[2] == doctest::Approx(-1.0).epsilon(1e-10));
    // rank-deficient design rejected
    CHECK_THROWS_AS(least_squares({a, a}, y), std::invalid_argument);
}
