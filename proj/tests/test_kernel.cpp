#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "coulgas/kernel.hpp"
#include "coulgas/quadrature.hpp"
#include "doctest.h"

using namespace coulgas;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("g_eval closed forms") {
    CHECK(g_eval(KernelSpec::log2(), 1.0) == doctest::Approx(0.0));
    CHECK(g_eval(KernelSpec::coul(3), 2.0) == doctest::Approx(0.5));
    CHECK(g_eval(KernelSpec::riesz(2, 1.0), 4.0) == doctest::Approx(0.25));
    CHECK(g_eval(KernelSpec::log1(), std::exp(-1.0)) == doctest::Approx(1.0));
}

TEST_CASE("g_eval domain errors") {
    CHECK_THROWS_AS(g_eval(KernelSpec::log2(), 0.0), SingularityError);
    CHECK_THROWS_AS(g_eval(KernelSpec::log2(), -1.0), std::domain_error);
}

TEST_CASE("KernelSpec invariants") {
    CHECK_THROWS_AS(KernelSpec::riesz(2, 2.5), CapabilityError);   // s >= d
    CHECK_THROWS_AS(KernelSpec::riesz(3, 0.5), CapabilityError);   // s < d-2
    CHECK_THROWS_AS(KernelSpec::coul(2), CapabilityError);
    CHECK(KernelSpec::log1().is_log());
    CHECK(KernelSpec::coul(3).has_local_electric_rep());
    CHECK_FALSE(KernelSpec::riesz(2, 1.0).has_local_electric_rep());
}

TEST_CASE("cd_const values") {
    CHECK(cd_const(2) == doctest::Approx(2.0 * kPi));
    CHECK(cd_const(3) == doctest::Approx(4.0 * kPi));
    CHECK(cd_const(4) == doctest::Approx(4.0 * kPi * kPi));
    CHECK_THROWS_AS(cd_const(1), std::domain_error);
}

TEST_CASE("sphere_area") {
    CHECK(sphere_area(2) == doctest::Approx(2.0 * kPi));
    CHECK(sphere_area(3) == doctest::Approx(4.0 * kPi));
    CHECK(sphere_area(4) == doctest::Approx(2.0 * kPi * kPi));
}

TEST_CASE("g strictly decreasing") {
    for (KernelSpec k : {KernelSpec::log1(), KernelSpec::log2(), KernelSpec::coul(3),
                         KernelSpec::riesz(2, 1.5)}) {
        double prev = g_eval(k, 0.05);
        for (double r = 0.1; r < 20.0; r *= 1.3) {
            double v = g_eval(k, r);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("g_grad matches finite differences") {
    const double step = 1e-5;
    for (KernelSpec k : {KernelSpec::log2(), KernelSpec::coul(3), KernelSpec::riesz(2, 1.5)}) {
        int d = k.d;
        for (double r = 0.1; r <= 10.0; r *= 2.1) {
            Vec x{0.6 * r, d >= 2 ? 0.8 * r : 0.0, 0.0};
            if (d == 3) {
                x = {r / std::sqrt(3.0), r / std::sqrt(3.0), r / std::sqrt(3.0)};
            }
            Vec g = g_grad(k, x);
            for (int a = 0; a < d; ++a) {
                Vec xp = x, xm = x;
                xp[a] += step;
                xm[a] -= step;
                double fd = (g_eval(k, norm(xp, d)) - g_eval(k, norm(xm, d))) / (2.0 * step);
                CHECK(g[a] == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("Log1 gradient extends to the plane") {
    Vec g = g_grad(KernelSpec::log1(), vec2(0.0, 2.0));
    CHECK(g[0] == doctest::Approx(0.0));
    CHECK(g[1] == doctest::Approx(-0.5));
}

TEST_CASE("f_eta support and values") {
    KernelSpec k2 = KernelSpec::log2();
    CHECK(f_eta(k2, vec2(0.2, 0.0), 0.1) == 0.0);
    CHECK(f_eta(k2, vec2(0.05, 0.0), 0.1) == doctest::Approx(std::log(2.0)));
    CHECK(f_eta(KernelSpec::coul(3), vec3(0.05, 0.0, 0.0), 0.1) == doctest::Approx(10.0));
    CHECK(f_eta_radial(k2, 0.1, 0.1) == 0.0);
    CHECK_THROWS_AS(f_eta(k2, vec2(0.0, 0.0), 0.1), SingularityError);
    CHECK(std::isinf(f_eta(k2, vec2(0.0, 0.0), 0.1, true)));
}

TEST_CASE("f_eta monotone decreasing in eta") {
    KernelSpec k = KernelSpec::coul(3);
    for (double r : {0.01, 0.03, 0.09}) {
        CHECK(f_eta_radial(k, r, 0.1) <= f_eta_radial(k, r, 0.2));
    }
}

// int_{B(0,eta)} f_eta <= C_d eta^2 (Log1 measured in its planar extension).
TEST_CASE("truncation integral bound") {
    for (double eta : {0.1, 0.01}) {
        // 2D log: exact value pi eta^2 / 2
        double v2 = integrate(
            [&](double r) {
                return r <= 0.0 ? 0.0
                                : 2.0 * kPi * r * f_eta_radial(KernelSpec::log2(), r, eta);
            },
            0.0, eta, 1e-12);
        CHECK(v2 == doctest::Approx(0.5 * kPi * eta * eta).epsilon(1e-6));
        CHECK(v2 <= 2.0 * kPi * eta * eta);
        // 3D Coulomb: exact value 2 pi eta^2 / 3
        double v3 = integrate(
            [&](double r) {
                return r <= 0.0 ? 0.0
                                : 4.0 * kPi * r * r * f_eta_radial(KernelSpec::coul(3), r, eta);
            },
            0.0, eta, 1e-12);
        CHECK(v3 == doctest::Approx(2.0 * kPi * eta * eta / 3.0).epsilon(1e-6));
        CHECK(v3 <= 4.0 * kPi * eta * eta);
    }
}

TEST_CASE("kernel case round trip") {
    for (KernelCase c : {KernelCase::Log1, KernelCase::Log2, KernelCase::Coul, KernelCase::Riesz})
        CHECK(kernel_case_from_string(to_string(c)) == c);
    CHECK_THROWS_AS(kernel_case_from_string("bogus"), CapabilityError);
}
