#include "coulgas/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "coulgas/error.hpp"

namespace coulgas {

namespace {

constexpr double kPi = std::numbers::pi;

// Antiderivative of sqrt(r^2 - t^2), clamped to [-r, r].
double sqrt_antideriv(double t, double r) {
    t = std::clamp(t, -r, r);
    return 0.5 * (t * std::sqrt(std::max(0.0, r * r - t * t)) + r * r * std::asin(t / r));
}

// Area of disk(0, r) intersected with the quadrant {X <= x, Y <= y}.
double disk_corner_area(double x, double y, double r) {
    if (x <= -r || y <= -r) return 0.0;
    x = std::min(x, r);
    y = std::min(y, r);
    auto S = [r](double t) { return sqrt_antideriv(t, r); };
    if (y >= r) return 2.0 * (S(x) - S(-r));
    if (x >= r) return 2.0 * (S(y) - S(-r));
    double ts = std::sqrt(std::max(0.0, r * r - y * y));
    if (y >= 0.0) {
        if (x <= -ts) return 2.0 * (S(x) - S(-r));
        double base = 2.0 * (S(-ts) - S(-r));
        double xx = std::min(x, ts);
        double mid = y * (xx + ts) + (S(xx) - S(-ts));
        double rest = (x > ts) ? 2.0 * (S(x) - S(ts)) : 0.0;
        return base + mid + rest;
    }
    if (x <= -ts) return 0.0;
    double xx = std::min(x, ts);
    return y * (xx + ts) + (S(xx) - S(-ts));
}

}  // namespace

double circle_rect_overlap_area(double cx, double cy, double r, double x0, double x1, double y0,
                                double y1) {
    return disk_corner_area(x1 - cx, y1 - cy, r) - disk_corner_area(x0 - cx, y1 - cy, r) -
           disk_corner_area(x1 - cx, y0 - cy, r) + disk_corner_area(x0 - cx, y0 - cy, r);
}

GridField GridField::make(const Configuration& config, const EquilibriumMeasure& eqm,
                          const TruncationVector& trunc, const GridParams& params) {
    config.validate();
    trunc.validate(config.n());
    const KernelSpec& k = eqm.kernel();
    if (!k.has_local_electric_rep())
        throw CapabilityError("GridField: kernel has no local electric representation");
    if (k.kase == KernelCase::Coul && k.d != 3)
        throw CapabilityError("GridField: Coulomb grids implemented for d = 3 only");
    if (config.d != k.d)
        throw std::invalid_argument("GridField: configuration dimension mismatch");

    GridField f(config, eqm, trunc);
    f.field_dim_ = (k.kase == KernelCase::Log1) ? 2 : k.d;
    int fd = f.field_dim_;

    // Charges live in the field space (Log1 charges sit on the real axis).
    Vec c{0.0, 0.0, 0.0};
    for (const Vec& p : config.points) c = add(c, p, fd);
    c = scale(c, 1.0 / config.n(), fd);
    f.centroid_ = c;
    double extent = eqm.support_radius() + norm(c, fd);
    for (const Vec& p : config.points) extent = std::max(extent, norm(sub(p, c, fd), fd));
    f.diam_ = 2.0 * extent;
    f.spacing_ = params.spacing > 0.0 ? params.spacing
                                      : f.diam_ / (fd == 3 ? 64.0 : 512.0);
    double half = (1.0 + params.pad_factor) * extent;
    for (int a = 0; a < fd; ++a) {
        f.box_lo_[a] = c[a] - half;
        f.box_hi_[a] = c[a] + half;
    }

    // Coarse stored samples for export.
    int res = (fd == 3) ? std::min(params.sample_res, 33) : params.sample_res;
    f.sample_res_ = res;
    double step = 2.0 * half / (res - 1);
    auto node_at_charge = [&](const Vec& x) {
        for (const Vec& p : config.points)
            if (norm(sub(x, p, fd), fd) < 1e-12 * std::max(1.0, extent)) return true;
        return false;
    };
    long total = 1;
    for (int a = 0; a < fd; ++a) total *= res;
    f.values_.resize(static_cast<size_t>(total));
    std::array<int, 3> iv{0, 0, 0};
    for (long lin = 0; lin < total; ++lin) {
        long rem = lin;
        for (int a = fd - 1; a >= 0; --a) {
            iv[a] = static_cast<int>(rem % res);
            rem /= res;
        }
        Vec x{0.0, 0.0, 0.0};
        for (int a = 0; a < fd; ++a) x[a] = f.box_lo_[a] + step * iv[a];
        if (node_at_charge(x)) {
            x[0] += 0.5 * f.spacing_;
            ++f.nudged_;
        }
        f.values_[static_cast<size_t>(lin)] = f.value(x);
    }
    return f;
}

double GridField::value(const Vec& x) const {
    int fd = field_dim_;
    const KernelSpec& k = eqm_.kernel();
    KahanSum acc;
    for (int i = 0; i < config_.n(); ++i) {
        double r = norm(sub(x, config_.points[i], fd), fd);
        double eta = trunc_.radii[static_cast<size_t>(i)];
        acc.add(g_eval(k, std::max(r, eta)));
    }
    double hmu = (k.kase == KernelCase::Log1) ? eqm_.h_plane(x[0], x[1]) : eqm_.h(x);
    return acc.value() - config_.n() * hmu;
}

Vec GridField::gradient(const Vec& x) const {
    int fd = field_dim_;
    const KernelSpec& k = eqm_.kernel();
    Vec g{0.0, 0.0, 0.0};
    for (int i = 0; i < config_.n(); ++i) {
        Vec dx = sub(x, config_.points[i], fd);
        double r = norm(dx, fd);
        if (r >= trunc_.radii[static_cast<size_t>(i)]) g = add(g, g_grad(k, dx), fd);
    }
    Vec hg = (k.kase == KernelCase::Log1) ? eqm_.h_plane_grad(x[0], x[1]) : eqm_.h_grad(x);
    return sub(g, scale(hg, static_cast<double>(config_.n()), fd), fd);
}

namespace {

struct Patch {
    Vec center;
    double eta;
    double R;
};

// Lowest-index patch containing x, or -1.
int patch_owner(const std::vector<Patch>& patches, const Vec& x, int fd) {
    for (size_t j = 0; j < patches.size(); ++j)
        if (norm(sub(x, patches[j].center, fd), fd) < patches[j].R) return static_cast<int>(j);
    return -1;
}

// Midpoint integral of |grad H|^2 over patch i in polar/spherical cells.
// Radial edges are aligned with the truncation sphere r = eta; cells whose
// center lies in an earlier patch are skipped (ownership clipping).
double patch_integral_2d(const GridField& field, const std::vector<Patch>& patches, int pi,
                         int refine) {
    const Patch& p = patches[static_cast<size_t>(pi)];
    int n_in = 16 << refine;
    int n_th = 64 << refine;
    int n_out = std::max(40, static_cast<int>(24.0 * std::log(p.R / p.eta))) << refine;
    double dth = 2.0 * kPi / n_th;
    KahanSum acc;
    auto cell = [&](double rm, double wr) {
        for (int kth = 0; kth < n_th; ++kth) {
            double th = (kth + 0.5) * dth;
            Vec x = vec2(p.center[0] + rm * std::cos(th), p.center[1] + rm * std::sin(th));
            int owner = patch_owner(patches, x, 2);
            if (owner != pi && owner != -1 && owner < pi) continue;
            Vec g = field.gradient(x);
            acc.add(norm2(g, 2) * wr * dth);
        }
    };
    // inner region [0, eta]: linear radial cells (no own-charge field here)
    double dr = p.eta / n_in;
    for (int kr = 0; kr < n_in; ++kr) {
        double rm = (kr + 0.5) * dr;
        cell(rm, rm * dr);
    }
    // annulus [eta, R]: log-spaced radial cells (own field ~ 1/r)
    if (p.R > p.eta) {
        double dt = std::log(p.R / p.eta) / n_out;
        for (int kr = 0; kr < n_out; ++kr) {
            double tm = std::log(p.eta) + (kr + 0.5) * dt;
            double rm = std::exp(tm);
            cell(rm, rm * rm * dt);
        }
    }
    return acc.value();
}

double patch_integral_3d(const GridField& field, const std::vector<Patch>& patches, int pi,
                         int refine) {
    const Patch& p = patches[static_cast<size_t>(pi)];
    int n_in = 8 << refine;
    int n_out = std::max(24, static_cast<int>(12.0 * std::log(p.R / p.eta))) << refine;
    int n_cos = 12 << refine;
    int n_phi = 24 << refine;
    double dcos = 2.0 / n_cos;
    double dphi = 2.0 * kPi / n_phi;
    KahanSum acc;
    auto shell = [&](double rm, double wr) {
        for (int kc = 0; kc < n_cos; ++kc) {
            double cz = -1.0 + (kc + 0.5) * dcos;
            double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
            for (int kp = 0; kp < n_phi; ++kp) {
                double phi = (kp + 0.5) * dphi;
                Vec x = vec3(p.center[0] + rm * sz * std::cos(phi),
                             p.center[1] + rm * sz * std::sin(phi), p.center[2] + rm * cz);
                int owner = patch_owner(patches, x, 3);
                if (owner != pi && owner != -1 && owner < pi) continue;
                Vec g = field.gradient(x);
                acc.add(norm2(g, 3) * wr * dcos * dphi);
            }
        }
    };
    double dr = p.eta / n_in;
    for (int kr = 0; kr < n_in; ++kr) {
        double rm = (kr + 0.5) * dr;
        shell(rm, rm * rm * dr);
    }
    if (p.R > p.eta) {
        double dt = std::log(p.R / p.eta) / n_out;
        for (int kr = 0; kr < n_out; ++kr) {
            double rm = std::exp(std::log(p.eta) + (kr + 0.5) * dt);
            shell(rm, rm * rm * rm * dt);
        }
    }
    return acc.value();
}

// Fraction of the cell covered by ball(c, R), by 4^3 subsampling (3D only).
double ball_cell_fraction(const Vec& c, double R, const Vec& lo, double h) {
    int inside = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int cc = 0; cc < 4; ++cc) {
                Vec x = vec3(lo[0] + (a + 0.5) * h / 4.0, lo[1] + (b + 0.5) * h / 4.0,
                             lo[2] + (cc + 0.5) * h / 4.0);
                if (norm(sub(x, c, 3), 3) < R) ++inside;
            }
    return inside / 64.0;
}

// One full pass of the composite quadrature at the given refinement level.
double integral_once(const GridField& field, const std::vector<Patch>& patches, double Rt,
                     int refine) {
    int fd = field.field_dim();
    const Vec c = field.centroid();
    double h = field.spacing() / (1 << refine);
    KahanSum acc;
    for (size_t i = 0; i < patches.size(); ++i) {
        acc.add(fd == 2 ? patch_integral_2d(field, patches, static_cast<int>(i), refine)
                        : patch_integral_3d(field, patches, static_cast<int>(i), refine));
    }
    // cartesian bulk over the disk/ball of radius Rt, minus the patches
    int ncell = static_cast<int>(std::ceil(2.0 * Rt / h));
    double lo0 = c[0] - 0.5 * ncell * h;
    double lo1 = c[1] - 0.5 * ncell * h;
    double lo2 = (fd == 3) ? c[2] - 0.5 * ncell * h : 0.0;
    double cellv = std::pow(h, fd);
    int nz = (fd == 3) ? ncell : 1;
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ncell; ++iy)
            for (int ix = 0; ix < ncell; ++ix) {
                Vec x = vec3(lo0 + (ix + 0.5) * h, lo1 + (iy + 0.5) * h,
                             (fd == 3) ? lo2 + (iz + 0.5) * h : 0.0);
                double rc = norm(sub(x, c, fd), fd);
                if (rc > Rt + h) continue;
                double w = cellv;
                double half_diag = 0.5 * h * std::sqrt(static_cast<double>(fd));
                if (rc + half_diag > Rt) {
                    if (fd == 2)
                        w = circle_rect_overlap_area(c[0], c[1], Rt, x[0] - 0.5 * h, x[0] + 0.5 * h,
                                                     x[1] - 0.5 * h, x[1] + 0.5 * h);
                    else
                        w = cellv * ball_cell_fraction(
                                        c, Rt, vec3(x[0] - 0.5 * h, x[1] - 0.5 * h, x[2] - 0.5 * h),
                                        h);
                    if (w <= 0.0) continue;
                }
                for (const Patch& p : patches) {
                    double rp = norm(sub(x, p.center, fd), fd);
                    if (rp > p.R + half_diag) continue;
                    if (rp + half_diag < p.R) {
                        w = 0.0;
                        break;
                    }
                    if (fd == 2)
                        w -= circle_rect_overlap_area(p.center[0], p.center[1], p.R, x[0] - 0.5 * h,
                                                      x[0] + 0.5 * h, x[1] - 0.5 * h,
                                                      x[1] + 0.5 * h);
                    else
                        w -= cellv *
                             ball_cell_fraction(p.center, p.R,
                                                vec3(x[0] - 0.5 * h, x[1] - 0.5 * h,
                                                     x[2] - 0.5 * h),
                                                h);
                }
                if (w <= 0.0) continue;
                Vec g = field.gradient(x);
                acc.add(norm2(g, fd) * w);
            }
    return acc.value();
}

// Dipole tail beyond radius Rt: |grad H|^2 ~ M / r^{2 fd}.
double tail_correction(const GridField& field, double Rt) {
    int fd = field.field_dim();
    const Vec c = field.centroid();
    double M = 0.0;
    int nb = 64;
    for (int k = 0; k < nb; ++k) {
        Vec x;
        if (fd == 2) {
            double th = 2.0 * kPi * (k + 0.5) / nb;
            x = vec2(c[0] + 0.99 * Rt * std::cos(th), c[1] + 0.99 * Rt * std::sin(th));
        } else {
            // Fibonacci points on the sphere
            double cz = 1.0 - 2.0 * (k + 0.5) / nb;
            double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
            double phi = kPi * (1.0 + std::sqrt(5.0)) * k;
            x = vec3(c[0] + 0.99 * Rt * sz * std::cos(phi), c[1] + 0.99 * Rt * sz * std::sin(phi),
                     c[2] + 0.99 * Rt * cz);
        }
        double r = 0.99 * Rt;
        M += std::pow(r, 2.0 * fd) * norm2(field.gradient(x), fd);
    }
    M /= nb;
    return (fd == 2) ? kPi * M / (Rt * Rt) : 4.0 * kPi * M / (3.0 * Rt * Rt * Rt);
}

}  // namespace

ElectricEnergyResult electric_energy(const GridField& field, double tol) {
    int fd = field.field_dim();
    const Configuration& cfg = field.config();
    const TruncationVector& trunc = field.trunc();
    double extent = 0.5 * field.diameter();
    double Rt = 0.0;
    for (int a = 0; a < fd; ++a)
        Rt = std::max(Rt, std::min(field.centroid()[a] - field.box_lo()[a],
                                   field.box_hi()[a] - field.centroid()[a]));

    std::vector<Patch> patches;
    for (int i = 0; i < cfg.n(); ++i) {
        Patch p;
        p.center = (fd == 2 && cfg.d == 1) ? vec2(cfg.points[i][0], 0.0) : cfg.points[i];
        p.eta = trunc.radii[static_cast<size_t>(i)];
        double min_dist = std::numeric_limits<double>::infinity();
        for (int j = 0; j < cfg.n(); ++j)
            if (j != i)
                min_dist = std::min(min_dist, norm(sub(cfg.points[i], cfg.points[j], cfg.d), cfg.d));
        double R = std::isfinite(min_dist) ? 0.45 * min_dist : 0.5 * extent;
        R = std::max(R, std::max(3.0 * p.eta, 24.0 * field.spacing()));
        R = std::min(R, 0.5 * extent);
        p.R = std::max(R, p.eta);  // patch always covers its own truncation ball
        patches.push_back(p);
    }

    double i0 = integral_once(field, patches, Rt, 0);
    double i1 = integral_once(field, patches, Rt, 1);
    double tail = tail_correction(field, Rt);
    double integral = i1 + (i1 - i0) / 3.0 + tail;
    double err = std::abs(i1 - i0) / 3.0 + 0.5 * std::abs(tail);

    double cd = cd_const(fd);
    KahanSum counter;
    for (double eta : trunc.radii) counter.add(g_eval(field.eqm().kernel(), eta));

    ElectricEnergyResult res;
    res.field_integral = integral;
    res.tail = tail;
    res.value = (integral - cd * counter.value()) / cd;
    res.error_estimate = err / cd;
    if (res.error_estimate > tol)
        throw NumericError("electric_energy: discretization estimate above tolerance",
                           res.error_estimate);
    return res;
}

}  // namespace coulgas
