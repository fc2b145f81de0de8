#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "coulgas/equilibrium.hpp"
#include "coulgas/quadrature.hpp"
#include "doctest.h"

using namespace coulgas;

namespace {

constexpr double kPi = std::numbers::pi;

EquilibriumMeasure disk(double a = 1.0) {
    return EquilibriumMeasure::make(PotentialSpec{a}, KernelSpec::log2());
}
EquilibriumMeasure semicircle(double a = 0.5) {
    return EquilibriumMeasure::make(PotentialSpec{a}, KernelSpec::log1());
}
EquilibriumMeasure ball(double a = 1.0) {
    return EquilibriumMeasure::make(PotentialSpec{a}, KernelSpec::coul(3));
}

// Quadrature oracle for h^mu in the disk case: 2D adaptive integral of
// -log|x-y| against the uniform density.
double disk_h_oracle(const EquilibriumMeasure& m, const Vec& x, double tol = 1e-9) {
    double R = m.support_radius();
    return integrate2d(
        [&](double u, double v) {
            if (u * u + v * v > R * R) return 0.0;
            double r = std::max(std::hypot(x[0] - u, x[1] - v), 1e-12);
            return -std::log(r) * m.density_sup();
        },
        -R, R, -R, R, tol);
}

// Oracle for the semicircle log-potential at a complex point.  Off-axis (or
// off-support) a Gauss-Chebyshev sum converges spectrally; for interior axis
// points the integral is split at the log singularity and integrated
// adaptively on both sides.
double semi_h_oracle(const EquilibriumMeasure& m, double x, double y) {
    double L = m.support_radius();
    if (y == 0.0 && std::abs(x) < L) {
        auto f = [&](double t) { return -std::log(std::abs(x - t)) * m.density(vec1(t)); };
        double eps = 1e-11;
        return integrate(f, -L, x - eps, 1e-11) + integrate(f, x + eps, L, 1e-11);
    }
    int n = 4000;
    double s = 0.0;
    // t = L cos(theta): density rho(t) dt = (2/(pi L^2)) sqrt(L^2-t^2) dt
    for (int k = 0; k < n; ++k) {
        double th = kPi * (k + 0.5) / n;
        double t = L * std::cos(th);
        double w = (kPi / n) * (2.0 / (kPi * L * L)) * (L * std::sin(th)) * (L * std::sin(th));
        s += -0.5 * std::log((x - t) * (x - t) + y * y) * w;
    }
    return s;
}

}  // namespace

TEST_CASE("potential validation") {
    CHECK_THROWS_AS(PotentialSpec{-1.0}.validate(), std::domain_error);
    PotentialSpec p{1.0, 0.5, 0.25};
    CHECK_THROWS_AS(p.validate(), std::domain_error);
    CHECK_THROWS_AS(EquilibriumMeasure::make(PotentialSpec{1.0}, KernelSpec::riesz(2, 1.0)),
                    CapabilityError);
    CHECK_THROWS_AS(EquilibriumMeasure::make(PotentialSpec{1.0}, KernelSpec::coul(4)),
                    CapabilityError);
}

TEST_CASE("disk descriptor and constants") {
    auto m = disk();
    CHECK(m.descriptor() == EquilibriumCase::UniformDisk);
    CHECK(m.support_radius() == doctest::Approx(1.0));
    CHECK(m.density_sup() == doctest::Approx(1.0 / kPi));
    CHECK(m.iv() == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(m.c() == doctest::Approx(0.5).epsilon(1e-12));
    // total mass 1
    CHECK(m.density_sup() * kPi * 1.0 == doctest::Approx(1.0).epsilon(1e-12));
    // c = I_V - (1/2) int V dmu
    CHECK(m.c() == doctest::Approx(m.iv() - 0.5 * m.int_v_dmu()).epsilon(1e-10));
    // density = Delta V / (2 c_d) = 2*2 a/(4 pi) = a/pi
    CHECK(m.density(vec2(0.3, 0.1)) == doctest::Approx(2.0 * 2.0 / (2.0 * cd_const(2))));
}

TEST_CASE("disk h closed form vs quadrature oracle") {
    auto m = disk();
    CHECK(m.h(vec2(0.0, 0.0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.h(vec2(2.0, 0.0)) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    for (Vec x : {vec2(0.0, 0.0), vec2(0.4, 0.3), vec2(1.7, -0.9), vec2(0.0, 0.99)}) {
        CHECK(m.h(x) == doctest::Approx(disk_h_oracle(m, x)).epsilon(1e-6));
    }
    // I_V oracle: I_V = iint g dmu dmu + int V dmu; radial closed-form check
    double gg = integrate2d(
        [&](double u, double v) {
            if (u * u + v * v > 1.0) return 0.0;
            return m.h(vec2(u, v)) * m.density_sup();
        },
        -1.0, 1.0, -1.0, 1.0, 1e-9);
    CHECK(gg == doctest::Approx(m.mean_g_energy()).epsilon(1e-7));
}

TEST_CASE("disk zeta") {
    auto m = disk();
    CHECK(m.zeta(vec2(2.0, 0.0)) == doctest::Approx(1.5 - std::log(2.0)).epsilon(1e-12));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 10000; ++i) {
        Vec x = vec2(u(rng), u(rng));
        CHECK(m.zeta(x) >= -1e-12);
        if (m.in_support(x)) CHECK(m.zeta(x) == 0.0);
    }
}

TEST_CASE("disk Euler-Lagrange and Laplacian") {
    auto m = disk(2.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int inside = 0;
    while (inside < 1000) {
        Vec x = vec2(u(rng), u(rng));
        if (!m.in_support(x, -1e-3)) continue;
        ++inside;
        CHECK(std::abs(m.h(x) + 0.5 * m.potential()(x, 2) - m.c()) <= 1e-10);
        // -Delta h = c_d mu by 5-point stencil
        if (m.in_support(x, -5e-3)) {
            double s = 1e-3;
            double lap = (m.h(vec2(x[0] + s, x[1])) + m.h(vec2(x[0] - s, x[1])) +
                          m.h(vec2(x[0], x[1] + s)) + m.h(vec2(x[0], x[1] - s)) -
                          4.0 * m.h(x)) /
                         (s * s);
            CHECK(-lap == doctest::Approx(cd_const(2) * m.density(x)).epsilon(1e-4));
        }
    }
}

TEST_CASE("disk far field") {
    auto m = disk();
    CHECK(std::abs(m.h(vec2(1e3, 0.0)) + std::log(1e3)) <= 1e-5);
}

TEST_CASE("semicircle descriptor") {
    auto m = semicircle();  // a = 1/2, V = x^2/2
    CHECK(m.descriptor() == EquilibriumCase::Semicircle);
    CHECK(m.support_radius() == doctest::Approx(2.0));
    CHECK(m.c() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.iv() == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(m.density(vec1(0.0)) == doctest::Approx(1.0 / kPi));
    CHECK(m.density(vec1(1.0)) == doctest::Approx(std::sqrt(3.0) / (2.0 * kPi)));
    // mass 1 by quadrature
    double mass = m.integrate([](const Vec&) { return 1.0; }, 1e-10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.c() == doctest::Approx(m.iv() - 0.5 * m.int_v_dmu()).epsilon(1e-10));
}

TEST_CASE("semicircle h vs Gauss-Chebyshev oracle") {
    auto m = semicircle();
    CHECK(m.h(vec1(1.0)) == doctest::Approx(m.c() - 0.25).epsilon(1e-12));
    for (double x : {0.0, 0.7, 1.9, 2.0, 2.4, 5.0, -3.3}) {
        CHECK(m.h(vec1(x)) == doctest::Approx(semi_h_oracle(m, x, 0.0)).epsilon(1e-7));
    }
    // planar extension against the oracle off the axis
    for (double y : {0.3, 1.2, -2.0}) {
        for (double x : {0.0, 1.1, 2.6}) {
            CHECK(m.h_plane(x, y) == doctest::Approx(semi_h_oracle(m, x, y)).epsilon(1e-7));
        }
    }
}

TEST_CASE("semicircle planar gradient vs finite differences") {
    auto m = semicircle();
    double s = 1e-6;
    for (auto [x, y] : {std::pair{0.4, 0.8}, {2.5, 0.1}, {-1.0, -1.5}, {3.0, 0.0}}) {
        Vec g = m.h_plane_grad(x, y);
        double fdx = (m.h_plane(x + s, y) - m.h_plane(x - s, y)) / (2.0 * s);
        double fdy = (m.h_plane(x, y + s) - m.h_plane(x, y - s)) / (2.0 * s);
        CHECK(g[0] == doctest::Approx(fdx).epsilon(1e-6));
        CHECK(g[1] == doctest::Approx(fdy).epsilon(1e-6));
    }
    // on-axis 1D gradient
    for (double x : {0.3, -1.2, 2.8}) {
        Vec g = m.h_grad(vec1(x));
        double fd = (m.h(vec1(x + s)) - m.h(vec1(x - s))) / (2.0 * s);
        CHECK(g[0] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("semicircle general coefficient") {
    auto m = semicircle(1.0);  // V = x^2, support [-sqrt(2), sqrt(2)]
    CHECK(m.support_radius() == doctest::Approx(std::sqrt(2.0)));
    CHECK(m.c() == doctest::Approx(0.5 + 0.5 * std::log(2.0)).epsilon(1e-12));
    for (double x : {0.0, 0.9, 1.8, -2.5}) {
        CHECK(m.h(vec1(x)) == doctest::Approx(semi_h_oracle(m, x, 0.0)).epsilon(1e-7));
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 2000; ++i) {
        double x = u(rng);
        CHECK(m.zeta(vec1(x)) >= -1e-12);
    }
}

TEST_CASE("semicircle cdf and mass_in_ball") {
    auto m = semicircle();
    CHECK(m.cdf1d(-2.0) == 0.0);
    CHECK(m.cdf1d(2.0) == 1.0);
    CHECK(m.cdf1d(0.0) == doctest::Approx(0.5));
    // derivative of cdf is the density
    double s = 1e-6;
    for (double x : {-1.5, -0.3, 0.8, 1.7}) {
        double fd = (m.cdf1d(x + s) - m.cdf1d(x - s)) / (2.0 * s);
        CHECK(fd == doctest::Approx(m.density(vec1(x))).epsilon(1e-6));
    }
    CHECK(m.mass_in_ball(vec1(0.0), 2.0) == doctest::Approx(1.0));
    CHECK(m.mass_in_ball(vec1(0.5), 0.25) ==
          doctest::Approx(m.cdf1d(0.75) - m.cdf1d(0.25)).epsilon(1e-12));
}

TEST_CASE("ball descriptor and h") {
    auto m = ball();
    CHECK(m.support_radius() == doctest::Approx(1.0));
    CHECK(m.density_sup() == doctest::Approx(3.0 / (4.0 * kPi)));
    CHECK(m.iv() == doctest::Approx(1.8).epsilon(1e-12));
    CHECK(m.c() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(m.c() == doctest::Approx(m.iv() - 0.5 * m.int_v_dmu()).epsilon(1e-10));
    // Newtonian radial oracle: uniform ball potential at radius r
    // h(r) = int g dmu via shell decomposition
    auto oracle = [&](double r) {
        auto f = [&](double t) {
            if (t == 0.0 && r == 0.0) return 0.0;
            double rho = m.density_sup() * 4.0 * kPi * t * t;  // shell mass
            // potential of a unit shell radius t at radius r: 1/max(r,t)
            return rho / std::max(r, t);
        };
        double split = std::clamp(r, 0.0, 1.0);  // kink at t = r
        return integrate(f, 0.0, split, 1e-12) + integrate(f, split, 1.0, 1e-12);
    };
    for (double r : {0.0, 0.3, 0.9, 1.5, 4.0}) {
        CHECK(m.h(vec3(r, 0.0, 0.0)) == doctest::Approx(oracle(r)).epsilon(1e-9));
    }
    CHECK(m.h(vec3(0.0, 0.0, 0.0)) == doctest::Approx(1.5));
    // EL relations
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 2000; ++i) {
        Vec x = vec3(u(rng), u(rng), u(rng));
        CHECK(m.zeta(x) >= -1e-12);
        if (m.in_support(x)) {
            CHECK(std::abs(m.h(x) + 0.5 * m.potential()(x, 3) - m.c()) <= 1e-10);
        }
    }
}

TEST_CASE("ball mass_in_ball overlap geometry") {
    auto m = ball();
    CHECK(m.mass_in_ball(vec3(0.0, 0.0, 0.0), 2.0) == doctest::Approx(1.0));
    CHECK(m.mass_in_ball(vec3(0.0, 0.0, 0.0), 0.5) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(m.mass_in_ball(vec3(5.0, 0.0, 0.0), 0.5) == 0.0);
    // Monte Carlo oracle for a partial overlap
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int hits = 0, tot = 0;
    Vec c = vec3(0.8, 0.2, 0.0);
    double r = 0.6;
    for (int i = 0; i < 2000000; ++i) {
        Vec x = vec3(u(rng), u(rng), u(rng));
        if (norm2(x, 3) > 1.0) continue;
        ++tot;
        if (norm(sub(x, c, 3), 3) <= r) ++hits;
    }
    double mc = static_cast<double>(hits) / tot;
    CHECK(m.mass_in_ball(c, r) == doctest::Approx(mc).epsilon(0.01));
}

TEST_CASE("disk mass_in_ball lens area") {
    auto m = disk();
    CHECK(m.mass_in_ball(vec2(0.0, 0.0), 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec c = vec2(0.7, -0.4);
    double r = 0.8;
    int hits = 0, tot = 0;
    for (int i = 0; i < 2000000; ++i) {
        Vec x = vec2(u(rng), u(rng));
        if (norm2(x, 2) > 1.0) continue;
        ++tot;
        if (norm(sub(x, c, 2), 2) <= r) ++hits;
    }
    CHECK(m.mass_in_ball(c, r) == doctest::Approx(static_cast<double>(hits) / tot).epsilon(0.01));
}

TEST_CASE("sampling matches the analytic law") {
    std::mt19937_64 rng(29);
    auto m = disk();
    int n = 200000;
    int in_half = 0;
    double sum_r2 = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec x = m.sample(rng);
        double r2 = norm2(x, 2);
        CHECK(r2 <= 1.0 + 1e-12);
        sum_r2 += r2;
        if (r2 <= 0.25) ++in_half;
    }
    CHECK(sum_r2 / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(static_cast<double>(in_half) / n == doctest::Approx(0.25).epsilon(0.02));

    auto s = semicircle();
    double m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec x = s.sample(rng);
        CHECK(std::abs(x[0]) <= 2.0 + 1e-9);
        m2 += x[0] * x[0];
    }
    CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.02));  // semicircle second moment

    auto b = ball();
    double r2m = 0.0;
    for (int i = 0; i < n; ++i) r2m += norm2(b.sample(rng), 3);
    CHECK(r2m / n == doctest::Approx(0.6).epsilon(0.02));  // 3 int r^4 dr = 3/5
}

TEST_CASE("entropy integrals") {
    auto m = disk();
    CHECK(m.entropy_integral() == doctest::Approx(std::log(1.0 / kPi)).epsilon(1e-12));
    auto s = semicircle();
    // oracle: int rho log rho over [-2,2] by direct quadrature at lower tol
    double oracle = integrate(
        [&](double x) {
            double r = s.density(vec1(x));
            return r > 0.0 ? r * std::log(r) : 0.0;
        },
        -2.0, 2.0, 1e-10);
    CHECK(s.entropy_integral() == doctest::Approx(oracle).epsilon(1e-8));
}
