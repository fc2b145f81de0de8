#pragma once

#include <complex>
#include <functional>
#include <random>
#include <string>

#include "coulgas/kernel.hpp"
#include "coulgas/vec.hpp"

namespace coulgas {

// Quadratic confinement V(x) = a |x|^2, plus an optional smooth perturbation
// handle V_t = V + t*xi used by the fluctuation experiments.
struct PotentialSpec {
    double a = 1.0;
    double perturbation_amplitude = 0.0;
    double max_perturbation = 0.25;

    double operator()(const Vec& x, int d) const { return a * norm2(x, d); }
    Vec grad(const Vec& x, int d) const { return scale(x, 2.0 * a, d); }
    void validate() const;
};

enum class EquilibriumCase { UniformDisk, Semicircle, UniformBall };

std::string to_string(EquilibriumCase c);

// Closed-form equilibrium measure mu_V for quadratic confinement.
//   Log2,  V = a|x|^2 : uniform disk, radius 1/sqrt(a), density a/pi
//   Log1,  V = a x^2  : semicircle on [-L, L], L = sqrt(2/a)
//   Coul3, V = a|x|^2 : uniform ball, radius a^{-1/3}
// All potentials, constants and integrals below are exact closed forms.
class EquilibriumMeasure {
  public:
    static EquilibriumMeasure make(const PotentialSpec& pot, const KernelSpec& kernel);

    EquilibriumCase descriptor() const { return case_; }
    const KernelSpec& kernel() const { return kernel_; }
    const PotentialSpec& potential() const { return pot_; }

    int dim() const { return kernel_.d; }
    double support_radius() const { return radius_; }   // R (disk/ball) or L (semicircle edge)
    double density_sup() const { return density_sup_; } // max of the density
    double iv() const { return iv_; }                   // I_V(mu_V)
    double c() const { return c_; }                     // Euler-Lagrange constant
    double int_v_dmu() const { return int_v_; }         // int V dmu
    // int int g(x-y) dmu dmu = I_V - int V dmu
    double mean_g_energy() const { return iv_ - int_v_; }

    // Density of mu at x (0 outside the support).
    double density(const Vec& x) const;
    bool in_support(const Vec& x, double slack = 0.0) const;

    // Electrostatic potential h^mu(x) = int g(x-y) dmu(y), and its gradient.
    double h(const Vec& x) const;
    Vec h_grad(const Vec& x) const;

    // Effective confinement zeta = h^mu + V/2 - c (exactly 0 on the support).
    double zeta(const Vec& x) const;

    // Planar extension of h^mu for the Log1 case: h evaluated at z = x + i y.
    double h_plane(double x, double y) const;
    // Gradient of the planar extension.
    Vec h_plane_grad(double x, double y) const;

    // mu(B_r(center)) by closed-form geometric overlap.
    double mass_in_ball(const Vec& center, double r) const;

    // int f dmu for a scalar field on R^d (adaptive quadrature, abs tol).
    double integrate(const std::function<double(const Vec&)>& f, double tol = 1e-10) const;

    // int mu log mu over the support.
    double entropy_integral() const;

    // Draw a point distributed according to mu.
    Vec sample(std::mt19937_64& rng) const;

    // CDF of the semicircle marginal (Log1 only).
    double cdf1d(double x) const;

  private:
    EquilibriumMeasure() = default;

    KernelSpec kernel_{};
    PotentialSpec pot_{};
    EquilibriumCase case_ = EquilibriumCase::UniformDisk;
    double radius_ = 1.0;
    double density_sup_ = 0.0;
    double iv_ = 0.0;
    double c_ = 0.0;
    double int_v_ = 0.0;
    double scale_ = 1.0;  // semicircle: x = scale_ * y with y canonical on [-2,2]

    std::complex<double> stieltjes_canonical(std::complex<double> w) const;
};

}  // namespace coulgas
