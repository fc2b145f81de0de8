#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <numbers>

#include "coulgas/sampler.hpp"
#include "coulgas/stats.hpp"
#include "doctest.h"

using namespace coulgas;

namespace {

constexpr double kPi = std::numbers::pi;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(0.5 * x) / kPi;
}

}  // namespace

TEST_CASE("one-particle marginal is the Boltzmann factor") {
    GibbsParams p;
    p.beta = 2.0;
    p.n = 1;
    p.kernel = KernelSpec::log1();
    p.pot = PotentialSpec{0.5};  // V = x^2/2 -> target exp(-x^2/2)
    McmcOptions o;
    o.sweeps = 120000;
    o.seed = 99;
    ChainState fin;
    auto samples = mcmc_run(p, o, &fin);
    REQUIRE(samples.size() >= 90000);
    std::vector<double> xs;
    for (const auto& c : samples) xs.push_back(c.points[0][0]);
    KsResult ks = ks_test(xs, normal_cdf);
    CHECK(ks.statistic < 0.01);
    // acceptance adapted into the target window
    CHECK(fin.acceptance_rate() > 0.2);
    CHECK(fin.acceptance_rate() < 0.5);
}

TEST_CASE("detailed balance: acceptance probability formula") {
    GibbsParams p;
    p.beta = 1.7;
    p.n = 5;
    p.kernel = KernelSpec::coul(3);  // d = 3 engages the N^{2/d-1} normalization
    p.pot = PotentialSpec{1.0};
    std::mt19937_64 rng = make_stream(5, 0);
    EquilibriumMeasure eqm = EquilibriumMeasure::make(p.pot, p.kernel);
    Configuration cfg;
    cfg.d = 3;
    for (int i = 0; i < 5; ++i) cfg.points.push_back(eqm.sample(rng));
    CHECK(p.energy_normalization() == doctest::Approx(std::pow(5.0, 2.0 / 3.0 - 1.0)));
    for (int rep = 0; rep < 20; ++rep) {
        int i = static_cast<int>(rng() % 5);
        Vec np = cfg.points[static_cast<size_t>(i)];
        std::normal_distribution<double> g(0.0, 0.3);
        for (int a = 0; a < 3; ++a) np[a] += g(rng);
        Configuration moved = cfg;
        moved.points[static_cast<size_t>(i)] = np;
        double dh = hamiltonian(moved, p.pot, p.kernel) - hamiltonian(cfg, p.pot, p.kernel);
        double expected = std::min(1.0, std::exp(-0.5 * p.beta * p.energy_normalization() * dh));
        CHECK(metropolis_accept_probability(p, cfg, i, np) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
    // d in {1,2}: plain convention
    GibbsParams p2;
    p2.kernel = KernelSpec::log2();
    p2.n = 7;
    CHECK(p2.energy_normalization() == 1.0);
}

TEST_CASE("reproducibility: identical seeds give identical streams") {
    GibbsParams p;
    p.beta = 2.0;
    p.n = 8;
    p.kernel = KernelSpec::log2();
    p.pot = PotentialSpec{1.0};
    McmcOptions o;
    o.sweeps = 200;
    o.seed = 1234;
    auto s1 = mcmc_run(p, o);
    auto s2 = mcmc_run(p, o);
    REQUIRE(s1.size() == s2.size());
    for (size_t i = 0; i < s1.size(); ++i)
        for (int j = 0; j < 8; ++j)
            for (int a = 0; a < 2; ++a) CHECK(s1[i].points[j][a] == s2[i].points[j][a]);
    McmcOptions o2 = o;
    o2.seed = 1235;
    auto s3 = mcmc_run(p, o2);
    CHECK(s3.back().points[0][0] != s1.back().points[0][0]);
}

TEST_CASE("ginibre: count, N=1 law, radial second moment") {
    Configuration c = sample_ginibre(64, 7);
    CHECK(c.n() == 64);
    CHECK(c.d == 2);
    // N=1: complex Gaussian with E|x|^2 = 1
    double m2 = 0.0;
    for (int rep = 0; rep < 4000; ++rep) {
        Configuration one = sample_ginibre(1, 7, static_cast<std::uint64_t>(rep));
        m2 += norm2(one.points[0], 2);
    }
    CHECK(m2 / 4000 == doctest::Approx(1.0).epsilon(0.06));
    // circle law: (1/N) sum |x|^2 -> 1/2
    double tot = 0.0;
    int draws = 20;
    for (int rep = 0; rep < draws; ++rep) {
        Configuration g = sample_ginibre(256, 11, static_cast<std::uint64_t>(rep));
        double s = 0.0;
        for (const Vec& x : g.points) s += norm2(x, 2);
        tot += s / 256.0;
    }
    CHECK(tot / draws == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("tridiagonal beta ensemble") {
    // N=1: Gaussian with variance 2/beta
    for (double beta : {1.0, 2.0, 4.0}) {
        double m2 = 0.0;
        int reps = 6000;
        for (int rep = 0; rep < reps; ++rep) {
            Configuration one = sample_beta_tridiag(1, beta, 13, static_cast<std::uint64_t>(rep));
            m2 += one.points[0][0] * one.points[0][0];
        }
        CHECK(m2 / reps == doctest::Approx(2.0 / beta).epsilon(0.08));
    }
    // beta=2, N=256: semicircle CDF
    std::vector<double> xs;
    for (int rep = 0; rep < 8; ++rep) {
        Configuration c = sample_beta_tridiag(256, 2.0, 17, static_cast<std::uint64_t>(rep));
        for (const Vec& x : c.points) xs.push_back(x[0]);
    }
    KsResult ks = ks_test(xs, semicircle_cdf);
    CHECK(ks.statistic < 0.02);
    // symmetry of the spectral law: mean ~ 0
    CHECK(mean(xs) == doctest::Approx(0.0).epsilon(1.0).scale(0.05));
}

TEST_CASE("oracle equivalence: MCMC vs tridiagonal at beta=2, N=8") {
    GibbsParams p;
    p.beta = 2.0;
    p.n = 8;
    p.kernel = KernelSpec::log1();
    p.pot = PotentialSpec{0.5};
    McmcOptions o;
    o.sweeps = 30000;
    o.thinning = 10;
    o.seed = 23;
    auto samples = mcmc_run(p, o);
    std::vector<double> mc, oracle;
    for (const auto& c : samples)
        for (const Vec& x : c.points) mc.push_back(x[0]);
    for (int rep = 0; rep < 3000; ++rep) {
        Configuration c = sample_beta_tridiag(8, 2.0, 29, static_cast<std::uint64_t>(rep));
        for (const Vec& x : c.points) oracle.push_back(x[0]);
    }
    KsResult ks = ks_test_two(mc, oracle);
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("checkpoint roundtrip resumes bit-exactly") {
    GibbsParams p;
    p.beta = 2.0;
    p.n = 6;
    p.kernel = KernelSpec::log2();
    p.pot = PotentialSpec{1.0};
    McmcOptions o;
    o.sweeps = 400;
    o.seed = 31;

    // uninterrupted reference
    ChainState ref = init_chain(p, o);
    std::vector<Configuration> ref_out;
    mcmc_continue(p, ref, 400, 80, 1, ref_out);

    // run half, checkpoint, reload, run the rest
    ChainState st = init_chain(p, o);
    std::vector<Configuration> out;
    mcmc_continue(p, st, 200, 80, 1, out);
    std::string path = "checkpoint_test.txt";
    save_checkpoint(path, p, st);
    Checkpoint cp = load_checkpoint(path);
    mcmc_continue(cp.params, cp.state, 200, 80, 1, out);
    std::remove(path.c_str());

    REQUIRE(out.size() == ref_out.size());
    for (size_t i = 0; i < out.size(); ++i)
        for (int j = 0; j < 6; ++j)
            for (int a = 0; a < 2; ++a) CHECK(out[i].points[j][a] == ref_out[i].points[j][a]);
    CHECK(cp.state.accepted == ref.accepted);
    CHECK(cp.state.sweep == ref.sweep);
}

TEST_CASE("parameter validation") {
    GibbsParams p;
    p.beta = -1.0;
    CHECK_THROWS_AS(p.validate(), std::domain_error);
    CHECK_THROWS_AS(sample_ginibre(0, 1), std::domain_error);
    CHECK_THROWS_AS(sample_beta_tridiag(4, 0.0, 1), std::domain_error);
}
