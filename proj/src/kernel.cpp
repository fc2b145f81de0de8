#include "coulgas/kernel.hpp"

#include <cmath>
#include <numbers>

namespace coulgas {

std::string to_string(KernelCase c) {
    switch (c) {
        case KernelCase::Log1: return "Log1";
        case KernelCase::Log2: return "Log2";
        case KernelCase::Coul: return "Coul";
        case KernelCase::Riesz: return "Riesz";
    }
    return "?";
}

KernelCase kernel_case_from_string(const std::string& s) {
    if (s == "Log1" || s == "log1") return KernelCase::Log1;
    if (s == "Log2" || s == "log2") return KernelCase::Log2;
    if (s == "Coul" || s == "coul") return KernelCase::Coul;
    if (s == "Riesz" || s == "riesz") return KernelCase::Riesz;
    throw CapabilityError("unknown kernel case: " + s);
}

KernelSpec KernelSpec::coul(int d) {
    KernelSpec k{KernelCase::Coul, d, static_cast<double>(d - 2)};
    k.validate();
    return k;
}

KernelSpec KernelSpec::riesz(int d, double s) {
    KernelSpec k{KernelCase::Riesz, d, s};
    k.validate();
    return k;
}

void KernelSpec::validate() const {
    switch (kase) {
        case KernelCase::Log1:
            if (d != 1 || s != 0.0) throw CapabilityError("Log1 requires d = 1, s = 0");
            break;
        case KernelCase::Log2:
            if (d != 2 || s != 0.0) throw CapabilityError("Log2 requires d = 2, s = 0");
            break;
        case KernelCase::Coul:
            if (d < 3) throw CapabilityError("Coul requires d >= 3");
            if (s != static_cast<double>(d - 2)) throw CapabilityError("Coul requires s = d - 2");
            break;
        case KernelCase::Riesz:
            if (d < 1) throw CapabilityError("Riesz requires d >= 1");
            if (s < std::max(0.0, static_cast<double>(d - 2)) || s >= static_cast<double>(d))
                throw CapabilityError("Riesz requires max(0, d-2) <= s < d");
            break;
    }
}

double sphere_area(int d) {
    if (d < 1) throw std::domain_error("sphere_area: d >= 1 required");
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double cd_const(int d) {
    if (d < 2) throw std::domain_error("cd_const: defined for d >= 2 only");
    if (d == 2) return 2.0 * std::numbers::pi;
    return (d - 2) * sphere_area(d);
}

double g_eval(const KernelSpec& k, double r) {
    if (r < 0.0) throw std::domain_error("g_eval: negative distance");
    if (r == 0.0) throw SingularityError("g_eval: r = 0");
    switch (k.kase) {
        case KernelCase::Log1:
        case KernelCase::Log2:
            return -std::log(r);
        case KernelCase::Coul:
            return std::pow(r, 2.0 - k.d);
        case KernelCase::Riesz:
            return std::pow(r, -k.s);
    }
    return 0.0;
}

Vec g_grad(const KernelSpec& k, const Vec& x) {
    // Gradients are evaluated in the embedding dimension: Log1 extends to the
    // plane, so two components are meaningful there.
    int dim = (k.kase == KernelCase::Log1) ? 2 : k.d;
    double r2 = norm2(x, dim);
    if (r2 == 0.0) throw SingularityError("g_grad: x = 0");
    switch (k.kase) {
        case KernelCase::Log1:
        case KernelCase::Log2:
            return scale(x, -1.0 / r2, dim);
        case KernelCase::Coul: {
            // d/dx r^{2-d} = (2-d) r^{-d} x
            double rd = std::pow(r2, -0.5 * k.d);
            return scale(x, (2.0 - k.d) * rd, dim);
        }
        case KernelCase::Riesz: {
            double rs = std::pow(r2, -0.5 * (k.s + 2.0));
            return scale(x, -k.s * rs, dim);
        }
    }
    return {0.0, 0.0, 0.0};
}

double f_eta_radial(const KernelSpec& k, double r, double eta, bool infinity_sentinel) {
    if (eta <= 0.0) throw std::domain_error("f_eta: eta must be positive");
    if (r >= eta) return 0.0;
    if (r == 0.0) {
        if (infinity_sentinel) return std::numeric_limits<double>::infinity();
        throw SingularityError("f_eta: x = 0");
    }
    double v = g_eval(k, r) - g_eval(k, eta);
    return v > 0.0 ? v : 0.0;
}

double f_eta(const KernelSpec& k, const Vec& x, double eta, bool infinity_sentinel) {
    int dim = (k.kase == KernelCase::Log1) ? 2 : k.d;
    return f_eta_radial(k, norm(x, dim), eta, infinity_sentinel);
}

}  // namespace coulgas
