#include "coulgas/jellium.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "coulgas/error.hpp"
#include "coulgas/stats.hpp"

namespace coulgas {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGamma = std::numbers::egamma;

double e1(double x) { return -std::expint(-x); }

// kernel/cell compatibility; returns the constant c_d of -div E = c_d (...)
double check_compat(const LatticeSpec& cell, const KernelSpec& kernel) {
    cell.validate();
    switch (kernel.kase) {
        case KernelCase::Log1:
            if (cell.d != 1) throw CapabilityError("jellium: Log1 kernel needs a 1D cell");
            return 2.0 * kPi;  // via the 2D strip extension
        case KernelCase::Log2:
            if (cell.d != 2) throw CapabilityError("jellium: Log2 kernel needs a 2D cell");
            return 2.0 * kPi;
        case KernelCase::Coul:
            if (kernel.d != 3 || cell.d != 3)
                throw CapabilityError("jellium: Coulomb case supported for d = 3 only");
            return cd_const(3);
        case KernelCase::Riesz:
            throw CapabilityError("jellium: Riesz kernels have no local electric representation");
    }
    throw CapabilityError("jellium: unknown kernel");
}

double auto_alpha(const LatticeSpec& cell) {
    return std::sqrt(kPi) / std::pow(cell.volume(), 1.0 / cell.d);
}

// integer search ranges so that |x - B n| <= cut is covered
template <int D>
Eigen::Matrix<double, D, D> basis_matrix(const LatticeSpec& cell) {
    Eigen::Matrix<double, D, D> B;
    for (int j = 0; j < D; ++j)
        for (int i = 0; i < D; ++i) B(i, j) = cell.basis[j][static_cast<size_t>(i)];
    return B;
}

template <int D, typename F>
void for_lattice(const Eigen::Matrix<double, D, D>& B, const Eigen::Matrix<double, D, 1>& center,
                 double cut, F&& f) {
    Eigen::Matrix<double, D, D> Binv = B.inverse();
    Eigen::Matrix<double, D, 1> c = Binv * center;
    int lo[D], hi[D];
    for (int i = 0; i < D; ++i) {
        double reach = cut * Binv.row(i).norm();
        lo[i] = static_cast<int>(std::floor(c(i) - reach)) - 1;
        hi[i] = static_cast<int>(std::ceil(c(i) + reach)) + 1;
    }
    Eigen::Matrix<double, D, 1> n;
    if constexpr (D == 2) {
        for (int a = lo[0]; a <= hi[0]; ++a)
            for (int b = lo[1]; b <= hi[1]; ++b) {
                n << a, b;
                f(Eigen::Matrix<double, D, 1>(B * n));
            }
    } else {
        for (int a = lo[0]; a <= hi[0]; ++a)
            for (int b = lo[1]; b <= hi[1]; ++b)
                for (int cc = lo[2]; cc <= hi[2]; ++cc) {
                    n << a, b, cc;
                    f(Eigen::Matrix<double, D, 1>(B * n));
                }
    }
}

// Ewald evaluation; when self = true, x must be 0 and the X = 0 real-space
// term is replaced by the small-distance constant of G - g.
template <int D>
double ewald(const LatticeSpec& cell, const Eigen::Matrix<double, D, 1>& x, double alpha,
             bool self) {
    double V = cell.volume();
    double a2 = alpha * alpha;
    Eigen::Matrix<double, D, D> B = basis_matrix<D>(cell);
    double rcut = 7.5 / alpha;
    KahanSum real;
    for_lattice<D>(B, x, rcut, [&](const Eigen::Matrix<double, D, 1>& X) {
        double r2 = (x - X).squaredNorm();
        if (r2 < 1e-24) {
            if (!self) throw SingularityError("periodic_green: evaluation at a charge");
            return;
        }
        if (a2 * r2 > 60.0) return;
        if constexpr (D == 2)
            real.add(0.5 * e1(a2 * r2));
        else
            real.add(std::erfc(alpha * std::sqrt(r2)) / std::sqrt(r2));
    });
    // reciprocal lattice A = 2 pi B^{-T}
    Eigen::Matrix<double, D, D> A = 2.0 * kPi * B.inverse().transpose();
    double kcut = 15.5 * alpha;
    KahanSum fourier;
    Eigen::Matrix<double, D, 1> zero = Eigen::Matrix<double, D, 1>::Zero();
    for_lattice<D>(A, zero, kcut, [&](const Eigen::Matrix<double, D, 1>& k) {
        double k2 = k.squaredNorm();
        if (k2 < 1e-24) return;
        if (k2 / (4.0 * a2) > 60.0) return;
        double coef = (D == 2 ? 2.0 * kPi : 4.0 * kPi) / (V * k2);
        fourier.add(coef * std::exp(-k2 / (4.0 * a2)) * std::cos(k.dot(x)));
    });
    double zero_mode = (D == 2) ? kPi / (2.0 * a2 * V) : kPi / (a2 * V);
    double self_term = 0.0;
    if (self) self_term = (D == 2) ? (-std::log(alpha) - 0.5 * kGamma) : (-2.0 * alpha / std::sqrt(kPi));
    return real.value() + fourier.value() + self_term - zero_mode;
}

double green_or_k(const LatticeSpec& cell, const KernelSpec& kernel, const Vec& x, double alpha,
                  bool self) {
    check_compat(cell, kernel);
    if (cell.d == 1) {
        double L = cell.volume();
        if (self) return -std::log(2.0 * kPi / L);
        double u = std::sin(kPi * x[0] / L);
        if (std::abs(u) < 1e-15)
            throw SingularityError("periodic_green: evaluation at a charge");
        return -std::log(std::abs(2.0 * u));
    }
    if (alpha <= 0.0) alpha = auto_alpha(cell);
    if (cell.d == 2) {
        Eigen::Vector2d p(x[0], x[1]);
        if (self) p.setZero();
        return ewald<2>(cell, p, alpha, self);
    }
    Eigen::Vector3d p(x[0], x[1], x[2]);
    if (self) p.setZero();
    return ewald<3>(cell, p, alpha, self);
}

}  // namespace

LatticeSpec LatticeSpec::chain(double length) {
    if (length <= 0.0) throw std::domain_error("LatticeSpec::chain: length > 0 required");
    LatticeSpec s;
    s.d = 1;
    s.basis[0] = vec1(length);
    return s;
}

LatticeSpec LatticeSpec::from_tau(double tau_re, double tau_im) {
    if (tau_im <= 0.0) throw std::domain_error("LatticeSpec::from_tau: Im(tau) > 0 required");
    LatticeSpec s;
    s.d = 2;
    double r = std::sqrt(tau_im);
    s.basis[0] = vec2(1.0 / r, 0.0);
    s.basis[1] = vec2(tau_re / r, tau_im / r);
    return s;
}

LatticeSpec LatticeSpec::square() { return from_tau(0.0, 1.0); }

LatticeSpec LatticeSpec::triangular() { return from_tau(0.5, 0.5 * std::sqrt(3.0)); }

LatticeSpec LatticeSpec::cubic(double side) {
    if (side <= 0.0) throw std::domain_error("LatticeSpec::cubic: side > 0 required");
    LatticeSpec s;
    s.d = 3;
    s.basis[0] = vec3(side, 0.0, 0.0);
    s.basis[1] = vec3(0.0, side, 0.0);
    s.basis[2] = vec3(0.0, 0.0, side);
    return s;
}

LatticeSpec LatticeSpec::scaled(const LatticeSpec& cell, double factor) {
    if (factor <= 0.0) throw std::domain_error("LatticeSpec::scaled: factor > 0 required");
    LatticeSpec s = cell;
    for (int j = 0; j < s.d; ++j) s.basis[j] = scale(s.basis[j], factor, s.d);
    return s;
}

double LatticeSpec::volume() const {
    if (d == 1) return std::abs(basis[0][0]);
    if (d == 2) return std::abs(basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0]);
    Eigen::Matrix3d B = basis_matrix<3>(*this);
    return std::abs(B.determinant());
}

void LatticeSpec::validate() const {
    if (d < 1 || d > 3) throw std::domain_error("LatticeSpec: d in {1,2,3} required");
    if (!(volume() > 1e-14)) throw std::domain_error("LatticeSpec: basis not linearly independent");
}

void PeriodicConfig::validate() const {
    cell.validate();
    if (points.empty()) throw NeutralityError("PeriodicConfig: no points");
    if (m <= 0.0) throw std::domain_error("PeriodicConfig: background density m > 0 required");
    double expected = m * cell.volume();
    if (std::abs(expected - n()) > 1e-9 * std::max(1.0, expected))
        throw NeutralityError("PeriodicConfig: point count != m * cell volume");
}

double periodic_green(const LatticeSpec& cell, const KernelSpec& kernel, const Vec& x,
                      double alpha) {
    return green_or_k(cell, kernel, x, alpha, false);
}

double madelung_constant(const LatticeSpec& cell, const KernelSpec& kernel, double alpha) {
    return green_or_k(cell, kernel, Vec{}, alpha, true);
}

double jellium_energy(const PeriodicConfig& pc, const KernelSpec& kernel, double alpha) {
    pc.validate();
    double c = check_compat(pc.cell, kernel);
    double K = madelung_constant(pc.cell, kernel, alpha);
    KahanSum pairs;
    int n = pc.n();
    for (int j = 0; j < n; ++j)
        for (int l = j + 1; l < n; ++l) {
            Vec diff = sub(pc.points[static_cast<size_t>(j)], pc.points[static_cast<size_t>(l)],
                           pc.cell.d);
            pairs.add(2.0 * periodic_green(pc.cell, kernel, diff, alpha));
        }
    return (c / pc.cell.volume()) * (pairs.value() + n * K);
}

double truncated_energy(const PeriodicConfig& pc, const KernelSpec& kernel, double eta,
                        double alpha) {
    if (eta <= 0.0) throw std::domain_error("truncated_energy: eta > 0 required");
    double c = check_compat(pc.cell, kernel);
    double w = jellium_energy(pc, kernel, alpha);
    // exact spherical means of the smeared pair sum:
    // d = 1 (strip): each circle smearing adds 2 eta / L per charge pair
    if (pc.cell.d == 1) return w + 8.0 * kPi * pc.m * pc.m * eta;
    return w + (c * c * pc.m * pc.m / pc.cell.d) * eta * eta;
}

RenormEnergyResult renorm_energy_periodic(const PeriodicConfig& pc, const KernelSpec& kernel,
                                          const std::vector<double>& eta_sequence) {
    if (eta_sequence.size() < 2)
        throw std::domain_error("renorm_energy_periodic: need >= 2 eta values");
    for (size_t i = 1; i < eta_sequence.size(); ++i)
        if (!(eta_sequence[i] < eta_sequence[i - 1]) || eta_sequence[i] <= 0.0)
            throw std::domain_error("renorm_energy_periodic: eta sequence must be positive "
                                    "and strictly decreasing");
    RenormEnergyResult res;
    res.etas = eta_sequence;
    int p = (pc.cell.d == 1) ? 1 : 2;
    std::vector<double> ones, powers;
    for (double eta : eta_sequence) {
        res.w_eta.push_back(truncated_energy(pc, kernel, eta));
        ones.push_back(1.0);
        powers.push_back(std::pow(eta, p));
    }
    std::vector<double> fit = least_squares({ones, powers}, res.w_eta);
    res.value = fit[0];
    // compare against the extrapolation from the two smallest etas only
    size_t k = eta_sequence.size();
    double e1v = powers[k - 2], e2v = powers[k - 1];
    double tail = (res.w_eta[k - 1] * e1v - res.w_eta[k - 2] * e2v) / (e1v - e2v);
    double resid = 0.0;
    for (size_t i = 0; i < k; ++i)
        resid = std::max(resid, std::abs(res.w_eta[i] - fit[0] - fit[1] * powers[i]));
    res.error_estimate = std::abs(res.value - tail) + resid + 1e-12 * std::abs(res.value);
    if (!std::isfinite(res.value))
        throw NumericError("renorm_energy_periodic: extrapolation not converged",
                           res.error_estimate);
    return res;
}

double scale_renorm(double w_value, double m, const KernelSpec& kernel) {
    if (m <= 0.0) throw std::domain_error("scale_renorm: m > 0 required");
    switch (kernel.kase) {
        case KernelCase::Log1:
            return m * w_value - 2.0 * kPi * m * std::log(m);
        case KernelCase::Log2:
            return m * w_value - kPi * m * std::log(m);
        case KernelCase::Coul:
            return std::pow(m, 2.0 - 2.0 / kernel.d) * w_value;
        case KernelCase::Riesz:
            throw CapabilityError("scale_renorm: Riesz kernels unsupported");
    }
    throw CapabilityError("scale_renorm: unknown kernel");
}

LatticeScanResult lattice_scan_2d(int nx, int ny, double im_max, int workers) {
    if (nx < 2 || ny < 2) throw std::domain_error("lattice_scan_2d: grid at least 2x2");
    double im_min = 0.5 * std::sqrt(3.0);
    if (im_max <= im_min) throw std::domain_error("lattice_scan_2d: im_max too small");
    std::vector<LatticeScanPoint> grid;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double re = 0.5 * i / (nx - 1);
            double im = im_min + (im_max - im_min) * j / (ny - 1);
            if (re * re + im * im < 1.0 - 1e-12) continue;
            grid.push_back({re, im, 0.0});
        }
    KernelSpec kern = KernelSpec::log2();
    auto work = [&](size_t lo, size_t hi) {
        for (size_t idx = lo; idx < hi; ++idx) {
            LatticeSpec cell = LatticeSpec::from_tau(grid[idx].tau_re, grid[idx].tau_im);
            grid[idx].w = 2.0 * kPi * madelung_constant(cell, kern);
        }
    };
    workers = std::max(1, workers);
    if (workers == 1) {
        work(0, grid.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (grid.size() + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            size_t lo = std::min(grid.size(), t * chunk);
            size_t hi = std::min(grid.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    LatticeScanResult res;
    res.grid = grid;
    res.argmin = grid.front();
    for (const auto& p : grid)
        if (p.w < res.argmin.w) res.argmin = p;
    return res;
}

}  // namespace coulgas
