#include "coulgas/equilibrium.hpp"

#include <cmath>
#include <numbers>

#include "coulgas/error.hpp"
#include "coulgas/quadrature.hpp"

namespace coulgas {

namespace {
constexpr double kPi = std::numbers::pi;
}

void PotentialSpec::validate() const {
    if (a <= 0.0) throw std::domain_error("PotentialSpec: quadratic coefficient must be positive");
    if (std::abs(perturbation_amplitude) > max_perturbation)
        throw std::domain_error("PotentialSpec: perturbation amplitude exceeds configured maximum");
}

std::string to_string(EquilibriumCase c) {
    switch (c) {
        case EquilibriumCase::UniformDisk: return "UniformDisk";
        case EquilibriumCase::Semicircle: return "Semicircle";
        case EquilibriumCase::UniformBall: return "UniformBall";
    }
    return "?";
}

EquilibriumMeasure EquilibriumMeasure::make(const PotentialSpec& pot, const KernelSpec& kernel) {
    pot.validate();
    kernel.validate();
    EquilibriumMeasure m;
    m.kernel_ = kernel;
    m.pot_ = pot;
    double a = pot.a;
    switch (kernel.kase) {
        case KernelCase::Log2: {
            m.case_ = EquilibriumCase::UniformDisk;
            m.radius_ = 1.0 / std::sqrt(a);
            m.density_sup_ = a / kPi;
            m.int_v_ = 0.5;
            m.iv_ = 0.75 + 0.5 * std::log(a);
            m.c_ = 0.5 + 0.5 * std::log(a);
            break;
        }
        case KernelCase::Log1: {
            m.case_ = EquilibriumCase::Semicircle;
            m.scale_ = 1.0 / std::sqrt(2.0 * a);          // x = scale * y, y on [-2,2]
            m.radius_ = 2.0 * m.scale_;
            m.density_sup_ = 1.0 / (kPi * m.scale_);      // density at 0: sqrt(4)/(2 pi scale)
            m.int_v_ = 0.5;
            m.iv_ = 0.75 + 0.5 * std::log(2.0 * a);
            m.c_ = 0.5 + 0.5 * std::log(2.0 * a);
            break;
        }
        case KernelCase::Coul: {
            if (kernel.d != 3)
                throw CapabilityError("equilibrium_measure: Coul closed forms implemented for d = 3");
            m.case_ = EquilibriumCase::UniformBall;
            m.radius_ = std::pow(a, -1.0 / 3.0);
            m.density_sup_ = 3.0 / (4.0 * kPi * std::pow(m.radius_, 3));
            m.c_ = 1.5 / m.radius_;
            m.int_v_ = 0.6 / m.radius_;
            m.iv_ = 1.8 / m.radius_;
            break;
        }
        case KernelCase::Riesz:
            throw CapabilityError(
                "equilibrium_measure: Riesz quadratic equilibria are not supported (no closed form here)");
    }
    return m;
}

double EquilibriumMeasure::density(const Vec& x) const {
    int d = dim();
    double r = norm(x, d);
    if (r > radius_) return 0.0;
    switch (case_) {
        case EquilibriumCase::UniformDisk:
        case EquilibriumCase::UniformBall:
            return density_sup_;
        case EquilibriumCase::Semicircle: {
            double y = x[0] / scale_;
            return std::sqrt(std::max(0.0, 4.0 - y * y)) / (2.0 * kPi * scale_);
        }
    }
    return 0.0;
}

bool EquilibriumMeasure::in_support(const Vec& x, double slack) const {
    return norm(x, dim()) <= radius_ + slack;
}

std::complex<double> EquilibriumMeasure::stieltjes_canonical(std::complex<double> w) const {
    // (w - sqrt(w-2) sqrt(w+2)) / 2, branch ~ 1/w at infinity, cut on [-2,2].
    std::complex<double> s = std::sqrt(w - 2.0) * std::sqrt(w + 2.0);
    return 0.5 * (w - s);
}

double EquilibriumMeasure::h(const Vec& x) const {
    int d = dim();
    double r = norm(x, d);
    switch (case_) {
        case EquilibriumCase::UniformDisk:
            if (r <= radius_)
                return -std::log(radius_) + 0.5 * pot_.a * (radius_ * radius_ - r * r);
            return -std::log(r);
        case EquilibriumCase::UniformBall: {
            double R = radius_;
            if (r <= R) return (3.0 * R * R - r * r) / (2.0 * R * R * R);
            return 1.0 / r;
        }
        case EquilibriumCase::Semicircle:
            return h_plane(x[0], 0.0);
    }
    return 0.0;
}

Vec EquilibriumMeasure::h_grad(const Vec& x) const {
    int d = dim();
    double r = norm(x, d);
    switch (case_) {
        case EquilibriumCase::UniformDisk:
            if (r <= radius_) return scale(x, -pot_.a, d);
            return scale(x, -1.0 / (r * r), d);
        case EquilibriumCase::UniformBall: {
            double R = radius_;
            if (r <= R) return scale(x, -1.0 / (R * R * R), d);
            return scale(x, -1.0 / (r * r * r), d);
        }
        case EquilibriumCase::Semicircle: {
            if (std::abs(x[0]) <= radius_) return vec1(-pot_.a * x[0]);
            std::complex<double> mw = stieltjes_canonical({x[0] / scale_, 0.0});
            return vec1(-mw.real() / scale_);
        }
    }
    return {0.0, 0.0, 0.0};
}

double EquilibriumMeasure::h_plane(double x, double y) const {
    if (case_ != EquilibriumCase::Semicircle)
        throw CapabilityError("h_plane: only the Log1 semicircle extends to the plane");
    std::complex<double> w(x / scale_, y / scale_);
    if (y == 0.0 && std::abs(x) <= radius_) {
        double u = x / scale_;
        return 0.5 - 0.25 * u * u - std::log(scale_);
    }
    std::complex<double> s = std::sqrt(w - 2.0) * std::sqrt(w + 2.0);
    std::complex<double> phi = 0.25 * w * w - 0.5 - 0.25 * w * s + std::log(0.5 * (w + s));
    return -phi.real() - std::log(scale_);
}

Vec EquilibriumMeasure::h_plane_grad(double x, double y) const {
    if (case_ != EquilibriumCase::Semicircle)
        throw CapabilityError("h_plane_grad: only the Log1 semicircle extends to the plane");
    std::complex<double> w(x / scale_, y / scale_);
    std::complex<double> mw = stieltjes_canonical(w);
    // h = -Re Phi(z/scale) - log scale, Phi' = stieltjes
    return vec2(-mw.real() / scale_, mw.imag() / scale_);
}

double EquilibriumMeasure::zeta(const Vec& x) const {
    if (in_support(x)) return 0.0;
    return h(x) + 0.5 * pot_(x, dim()) - c_;
}

double EquilibriumMeasure::cdf1d(double x) const {
    if (case_ != EquilibriumCase::Semicircle)
        throw CapabilityError("cdf1d: defined for the semicircle only");
    double y = x / scale_;
    if (y <= -2.0) return 0.0;
    if (y >= 2.0) return 1.0;
    return 0.5 + y * std::sqrt(4.0 - y * y) / (4.0 * kPi) + std::asin(0.5 * y) / kPi;
}

namespace {

// Area of the intersection of two disks at center distance t.
double disk_overlap_area(double t, double r1, double r2) {
    if (t >= r1 + r2) return 0.0;
    double rmin = std::min(r1, r2);
    if (t <= std::abs(r1 - r2)) return kPi * rmin * rmin;
    double a1 = std::acos(std::clamp((t * t + r1 * r1 - r2 * r2) / (2.0 * t * r1), -1.0, 1.0));
    double a2 = std::acos(std::clamp((t * t + r2 * r2 - r1 * r1) / (2.0 * t * r2), -1.0, 1.0));
    double k = (-t + r1 + r2) * (t + r1 - r2) * (t - r1 + r2) * (t + r1 + r2);
    return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(0.0, k));
}

// Volume of the intersection of two balls at center distance t.
double ball_overlap_volume(double t, double r1, double r2) {
    if (t >= r1 + r2) return 0.0;
    double rmin = std::min(r1, r2);
    if (t <= std::abs(r1 - r2)) return 4.0 / 3.0 * kPi * rmin * rmin * rmin;
    double num = (r1 + r2 - t) * (r1 + r2 - t) *
                 (t * t + 2.0 * t * r2 - 3.0 * r2 * r2 + 2.0 * t * r1 + 6.0 * r1 * r2 -
                  3.0 * r1 * r1);
    return kPi * num / (12.0 * t);
}

}  // namespace

double EquilibriumMeasure::mass_in_ball(const Vec& center, double r) const {
    if (r <= 0.0) throw std::domain_error("mass_in_ball: r > 0 required");
    double t = norm(center, dim());
    switch (case_) {
        case EquilibriumCase::UniformDisk:
            return density_sup_ * disk_overlap_area(t, r, radius_);
        case EquilibriumCase::UniformBall:
            return density_sup_ * ball_overlap_volume(t, r, radius_);
        case EquilibriumCase::Semicircle:
            return cdf1d(center[0] + r) - cdf1d(center[0] - r);
    }
    return 0.0;
}

double EquilibriumMeasure::integrate(const std::function<double(const Vec&)>& f, double tol) const {
    switch (case_) {
        case EquilibriumCase::Semicircle:
            return coulgas::integrate(
                [&](double x) { return f(vec1(x)) * density(vec1(x)); }, -radius_, radius_, tol);
        case EquilibriumCase::UniformDisk: {
            double R = radius_;
            return integrate2d(
                [&](double x, double y) {
                    if (x * x + y * y > R * R) return 0.0;
                    return f(vec2(x, y)) * density_sup_;
                },
                -R, R, -R, R, tol);
        }
        case EquilibriumCase::UniformBall:
            throw CapabilityError("integrate: generic quadrature over the ball is not provided");
    }
    return 0.0;
}

double EquilibriumMeasure::entropy_integral() const {
    switch (case_) {
        case EquilibriumCase::UniformDisk:
        case EquilibriumCase::UniformBall:
            return std::log(density_sup_);
        case EquilibriumCase::Semicircle:
            return coulgas::integrate(
                [&](double x) {
                    double rho = density(vec1(x));
                    return rho > 0.0 ? rho * std::log(rho) : 0.0;
                },
                -radius_, radius_, 1e-12);
    }
    return 0.0;
}

Vec EquilibriumMeasure::sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    switch (case_) {
        case EquilibriumCase::UniformDisk: {
            double r = radius_ * std::sqrt(unif(rng));
            double th = 2.0 * kPi * unif(rng);
            return vec2(r * std::cos(th), r * std::sin(th));
        }
        case EquilibriumCase::UniformBall: {
            double r = radius_ * std::cbrt(unif(rng));
            double z = 2.0 * unif(rng) - 1.0;
            double th = 2.0 * kPi * unif(rng);
            double s = std::sqrt(1.0 - z * z);
            return vec3(r * s * std::cos(th), r * s * std::sin(th), r * z);
        }
        case EquilibriumCase::Semicircle: {
            // invert the CDF by bisection
            double u = unif(rng);
            double lo = -radius_, hi = radius_;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                (cdf1d(mid) < u ? lo : hi) = mid;
            }
            return vec1(0.5 * (lo + hi));
        }
    }
    return {0.0, 0.0, 0.0};
}

}  // namespace coulgas
