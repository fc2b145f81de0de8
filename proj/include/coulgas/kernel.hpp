#pragma once

#include <limits>
#include <string>

#include "coulgas/error.hpp"
#include "coulgas/vec.hpp"

namespace coulgas {

enum class KernelCase { Log1, Log2, Coul, Riesz };

std::string to_string(KernelCase c);
KernelCase kernel_case_from_string(const std::string& s);

// Interaction kernel descriptor: which g, the ambient dimension d, and the
// Riesz exponent s (s = 0 in the logarithmic cases).
struct KernelSpec {
    KernelCase kase;
    int d;
    double s;

    static KernelSpec log1() { return {KernelCase::Log1, 1, 0.0}; }
    static KernelSpec log2() { return {KernelCase::Log2, 2, 0.0}; }
    static KernelSpec coul(int d);
    static KernelSpec riesz(int d, double s);

    void validate() const;

    bool is_log() const { return kase == KernelCase::Log1 || kase == KernelCase::Log2; }

    // True when g admits a local electric-field representation (Log1 via the
    // plane extension, Log2 and Coul directly).  Riesz kernels are
    // pairwise-only here.
    bool has_local_electric_rep() const { return kase != KernelCase::Riesz; }
};

// Surface area of the unit sphere S^{d-1} in R^d.
double sphere_area(int d);

// Coulomb constant c_d with -Delta g = c_d delta_0:  2*pi in d=2,
// (d-2)|S^{d-1}| for d >= 3.
double cd_const(int d);

// g(r) for r > 0.  Throws SingularityError at r = 0, std::domain_error for r < 0.
double g_eval(const KernelSpec& k, double r);

// Gradient of g at x != 0 (length d).
Vec g_grad(const KernelSpec& k, const Vec& x);

// Truncation f_eta(x) = (g(x) - g(eta))_+, supported in B(0, eta).
// At x = 0 throws by default; with infinity_sentinel = true returns +inf.
double f_eta(const KernelSpec& k, const Vec& x, double eta, bool infinity_sentinel = false);

// f_eta as a function of the radius |x|.
double f_eta_radial(const KernelSpec& k, double r, double eta, bool infinity_sentinel = false);

}  // namespace coulgas
