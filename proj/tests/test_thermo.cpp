#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "coulgas/error.hpp"
#include "coulgas/quadrature.hpp"
#include "coulgas/rng.hpp"
#include "coulgas/thermo.hpp"
#include "doctest.h"

using namespace coulgas;

namespace {

constexpr double kPi = std::numbers::pi;

// direct quadrature of the two-particle 1D partition integral
double logz2_quadrature(double beta, double a) {
    double z = integrate(
        [&](double x) {
            return integrate(
                [&](double y) {
                    return std::pow(std::abs(x - y), beta) *
                           std::exp(-beta * a * (x * x + y * y));
                },
                -8.0, 8.0, 1e-11);
        },
        -8.0, 8.0, 1e-9);
    return std::log(z);
}

}  // namespace

TEST_CASE("N=1 closed form is the Gaussian integral") {
    for (int d : {1, 2, 3})
        for (double a : {0.5, 1.0, 2.0})
            for (double beta : {1.0, 2.0, 4.0})
                CHECK(logz_closed_form(1, beta, d, a) ==
                      doctest::Approx(0.5 * d * std::log(2.0 * kPi / (a * beta))).epsilon(1e-14));
    // specialized branches agree at N=1
    CHECK(logz_closed_form(1, 3.0, 1, 0.5) ==
          doctest::Approx(0.5 * std::log(2.0 * kPi / 1.5)).epsilon(1e-13));
    CHECK(logz_closed_form(1, 2.0, 2, 1.0) == doctest::Approx(std::log(kPi)).epsilon(1e-13));
    CHECK_THROWS_AS(logz_closed_form(3, 2.0, 3, 1.0), CapabilityError);
    CHECK_THROWS_AS(logz_closed_form(4, 1.0, 2, 1.0), CapabilityError);  // 2D needs beta = 2
    CHECK_THROWS_AS(logz_closed_form(0, 2.0, 1, 0.5), std::domain_error);
}

TEST_CASE("N=2 1D closed form vs direct quadrature") {
    for (double beta : {1.0, 2.0, 4.0})
        CHECK(logz_closed_form(2, beta, 1, 0.5) ==
              doctest::Approx(logz2_quadrature(beta, 0.5)).epsilon(1e-6));
    // beta=2 value is log(pi) analytically
    CHECK(logz_closed_form(2, 2.0, 1, 0.5) == doctest::Approx(std::log(kPi)).epsilon(1e-12));
}

TEST_CASE("N=2 2D closed form vs Monte Carlo quadrature") {
    // Z = iint |z1-z2|^2 exp(-2(|z1|^2+|z2|^2)); importance sample the Gaussian
    CHECK(logz_closed_form(2, 2.0, 2, 1.0) ==
          doctest::Approx(2.0 * std::log(0.5 * kPi)).epsilon(1e-12));
    std::mt19937_64 rng = make_stream(91, 0);
    std::normal_distribution<double> g(0.0, 0.5);  // variance 1/4 per coordinate
    int reps = 400000;
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < reps; ++i) {
        double dx = g(rng) - g(rng), dy = g(rng) - g(rng);
        double v = dx * dx + dy * dy;
        acc += v;
        acc2 += v * v;
    }
    double mean_v = acc / reps;
    double se = std::sqrt((acc2 / reps - mean_v * mean_v) / reps);
    double logz_mc = 2.0 * std::log(0.5 * kPi) + std::log(mean_v);
    double logz_se = se / mean_v;
    CHECK(std::abs(logz_mc - logz_closed_form(2, 2.0, 2, 1.0)) <= 3.0 * logz_se);
}

TEST_CASE("mean energy estimate") {
    GibbsParams p;
    p.beta = 2.0;
    p.n = 1;
    p.kernel = KernelSpec::log1();
    p.pot = PotentialSpec{0.5};
    McmcOptions o;
    o.sweeps = 40000;
    o.thinning = 2;
    o.seed = 5;
    auto samples = mcmc_run(p, o);
    MeanEnergy me = mean_energy_estimate(p, samples);
    CHECK(std::abs(me.value - 1.0 / p.beta) <= 3.0 * me.se + 0.01);
    CHECK(me.ess >= 20.0);
    // thinning invariance within combined error bars
    McmcOptions o5 = o;
    o5.thinning = 10;
    MeanEnergy me5 = mean_energy_estimate(p, mcmc_run(p, o5));
    CHECK(std::abs(me.value - me5.value) <= 3.0 * (me.se + me5.se) + 0.01);
    // constant series has no effective samples
    std::vector<Configuration> frozen(100, samples.front());
    CHECK_THROWS_AS(mean_energy_estimate(p, frozen), InsufficientDataError);
}

TEST_CASE("ti_reduce on an exact one-particle curve") {
    // N=1, V=x^2/2: E[H] = 1/beta and log Z = (1/2) log(4 pi / beta)
    auto make_curve = [](int nodes) {
        TiCurve c;
        for (int i = 0; i < nodes; ++i) {
            double b = 2.0 + 2.0 * i / (nodes - 1);
            c.betas.push_back(b);
            c.energies.push_back(1.0 / b);
            c.ses.push_back(0.0);
        }
        return c;
    };
    double anchor = logz_closed_form(1, 2.0, 1, 0.5);
    double exact = logz_closed_form(1, 4.0, 1, 0.5);
    TiResult r9 = ti_reduce(anchor, make_curve(9), 1.0);
    TiResult r17 = ti_reduce(anchor, make_curve(17), 1.0);
    CHECK(std::abs(r9.value - exact) <= 2.0 * r9.error);
    CHECK(std::abs(r17.value - exact) <= 2.0 * r17.error);
    // grid refinement shrinks the quadrature error estimate
    CHECK(r17.error < 0.5 * r9.error);
    CHECK(std::abs(r17.value - exact) < std::abs(r9.value - exact));
    CHECK_THROWS_AS(ti_reduce(0.0, TiCurve{{1.0, 2.0}, {1.0, 1.0}, {0.0, 0.0}}, 1.0),
                    std::domain_error);
}

TEST_CASE("thermodynamic integration matches Selberg at N=4") {
    GibbsParams p;
    p.beta = 2.0;
    p.n = 4;
    p.kernel = KernelSpec::log1();
    p.pot = PotentialSpec{0.5};
    TiOptions o;
    o.nodes = 9;
    o.sweeps = 30000;
    o.workers = 4;
    o.seed = 7;
    TiResult r = logz_estimate_ti(p, 2.0, 4.0, o);
    double exact = logz_closed_form(4, 4.0, 1, 0.5);
    CHECK(std::abs(r.value - exact) / std::abs(exact) < 0.02);
    CHECK(std::abs(r.value - exact) <= 3.0 * r.error + 0.01);
    // anchor target returns the anchor exactly
    TiResult same = logz_estimate_ti(p, 2.0, 2.0, o);
    CHECK(same.value == logz_closed_form(4, 2.0, 1, 0.5));
    CHECK(same.error == 0.0);
    // tolerance enforcement
    TiOptions tight = o;
    tight.sweeps = 2000;
    tight.tolerance = 1e-9;
    CHECK_THROWS_AS(logz_estimate_ti(p, 2.0, 4.0, tight), NumericError);
}

TEST_CASE("expansion fit recovers the predicted coefficients") {
    std::vector<int> ns{8, 16, 32, 64};
    std::vector<double> lz;
    for (int n : ns) lz.push_back(logz_closed_form(n, 2.0, 1, 0.5));
    double iv = 0.75;  // quadratic 1D case, a = 1/2
    FreeEnergyReport rep = expansion_fit(ns, lz, {}, 2.0, 1, iv, true);
    CHECK(std::abs(rep.coeff_leading - rep.predicted_leading) <=
          0.05 * std::abs(rep.predicted_leading));
    CHECK(rep.predicted_leading == doctest::Approx(-0.75));
    CHECK(std::abs(rep.coeff_nlogn - rep.predicted_nlogn) <=
          0.15 * std::abs(rep.predicted_nlogn));
    CHECK(rep.predicted_nlogn == doctest::Approx(1.0));
    // order-N coefficient stable when adding N = 128
    std::vector<int> ns5{8, 16, 32, 64, 128};
    std::vector<double> lz5 = lz;
    lz5.push_back(logz_closed_form(128, 2.0, 1, 0.5));
    FreeEnergyReport rep5 = expansion_fit(ns5, lz5, {}, 2.0, 1, iv, true);
    CHECK(std::abs(rep5.coeff_n - rep.coeff_n) <= 0.2 * std::abs(rep.coeff_n));
    CHECK_THROWS_AS(expansion_fit({8, 16}, {1.0, 2.0}, {}, 2.0, 1, iv, true),
                    std::domain_error);
}

TEST_CASE("leading-order constant approached monotonically") {
    double iv = 0.75;
    double prev = 1e9;
    for (int n : {8, 16, 32, 64}) {
        double scaled = logz_closed_form(n, 2.0, 1, 0.5) / (static_cast<double>(n) * n);
        // decreases toward -(beta/2) I_V from above (the +N log N correction)
        CHECK(scaled < prev);
        CHECK(scaled > -0.5 * 2.0 * iv);
        prev = scaled;
    }
    CHECK(prev == doctest::Approx(-0.75).epsilon(0.12));
}

TEST_CASE("upper bound constant stays bounded") {
    for (double beta : {1.0, 2.0, 4.0})
        for (int n : {2, 8, 16, 32, 64}) {
            double c = upper_bound_constant(logz_closed_form(n, beta, 1, 0.5), n, beta, 1, 0.75,
                                            true);
            CHECK(c <= 10.0 * (1.0 + beta));
        }
    for (int n : {2, 8, 32}) {
        double c = upper_bound_constant(logz_closed_form(n, 2.0, 2, 1.0), n, 2.0, 2,
                                        0.75 + 0.5 * std::log(1.0), true);
        CHECK(c <= 10.0 * (1.0 + 2.0));
    }
}
