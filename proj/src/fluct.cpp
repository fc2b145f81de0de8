#include "coulgas/fluct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coulgas/error.hpp"
#include "coulgas/quadrature.hpp"

namespace coulgas {

namespace {

// quintic smoothstep: C^2 with vanishing first and second derivatives at 0, 1
double smoothstep(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep_d(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }

}  // namespace

TestFunction TestFunction::radial_bump(const Vec& center, double r_inner, double r_outer, int d) {
    if (!(0.0 <= r_inner && r_inner < r_outer))
        throw std::domain_error("radial_bump: need 0 <= r_inner < r_outer");
    TestFunction tf;
    tf.kind_ = TestFunctionKind::RadialBump;
    tf.d_ = d;
    tf.center_ = center;
    tf.radius_ = r_outer;
    tf.inner_ = r_inner;
    double w = r_outer - r_inner;
    tf.f_ = [center, r_inner, r_outer, w, d](const Vec& x) {
        double r = norm(sub(x, center, d), d);
        if (r <= r_inner) return 1.0;
        if (r >= r_outer) return 0.0;
        return smoothstep((r_outer - r) / w);
    };
    tf.grad_ = [center, r_inner, r_outer, w, d](const Vec& x) {
        Vec dx = sub(x, center, d);
        double r = norm(dx, d);
        if (r <= r_inner || r >= r_outer || r == 0.0) return Vec{0.0, 0.0, 0.0};
        double dfdr = -smoothstep_d((r_outer - r) / w) / w;
        return scale(dx, dfdr / r, d);
    };
    return tf;
}

TestFunction TestFunction::polynomial1d(std::vector<double> coeffs, double w_inner,
                                        double w_outer) {
    if (!(0.0 <= w_inner && w_inner < w_outer))
        throw std::domain_error("polynomial1d: need 0 <= w_inner < w_outer");
    TestFunction tf;
    tf.kind_ = TestFunctionKind::Polynomial1D;
    tf.d_ = 1;
    tf.center_ = vec1(0.0);
    tf.radius_ = w_outer;
    tf.inner_ = w_inner;
    double w = w_outer - w_inner;
    auto poly = [coeffs](double x) {
        double p = 0.0;
        for (size_t k = coeffs.size(); k-- > 0;) p = p * x + coeffs[k];
        return p;
    };
    auto poly_d = [coeffs](double x) {
        double p = 0.0;
        for (size_t k = coeffs.size(); k-- > 1;) p = p * x + k * coeffs[k];
        return p;
    };
    auto window = [w_inner, w_outer, w](double r) {
        if (r <= w_inner) return 1.0;
        if (r >= w_outer) return 0.0;
        return smoothstep((w_outer - r) / w);
    };
    auto window_d = [w_inner, w_outer, w](double r) {
        if (r <= w_inner || r >= w_outer) return 0.0;
        return -smoothstep_d((w_outer - r) / w) / w;
    };
    tf.f_ = [poly, window](const Vec& x) { return poly(x[0]) * window(std::abs(x[0])); };
    tf.grad_ = [poly, poly_d, window, window_d](const Vec& x) {
        double r = std::abs(x[0]);
        double sign = x[0] >= 0.0 ? 1.0 : -1.0;
        return vec1(poly_d(x[0]) * window(r) + poly(x[0]) * window_d(r) * sign);
    };
    return tf;
}

TestFunction TestFunction::custom(std::function<double(const Vec&)> f,
                                  std::function<Vec(const Vec&)> grad, int d,
                                  const Vec& support_center, double support_radius) {
    TestFunction tf;
    tf.kind_ = TestFunctionKind::Custom;
    tf.d_ = d;
    tf.center_ = support_center;
    tf.radius_ = support_radius;
    tf.f_ = std::move(f);
    tf.grad_ = std::move(grad);
    return tf;
}

double TestFunction::dirichlet_integral() const {
    switch (kind_) {
        case TestFunctionKind::RadialBump: {
            double sd = (d_ == 1) ? 2.0 : sphere_area(d_);
            return integrate(
                [&](double r) {
                    Vec x = center_;
                    x[0] += r;
                    double g2 = norm2(grad_(x), d_);
                    return g2 * sd * std::pow(r, d_ - 1);
                },
                inner_, radius_, 1e-12);
        }
        case TestFunctionKind::Polynomial1D:
            return integrate(
                [&](double x) { return norm2(grad_(vec1(x)), 1); }, -radius_, radius_, 1e-12);
        case TestFunctionKind::Custom:
            throw CapabilityError("dirichlet_integral: provide a preset test function");
    }
    return 0.0;
}

bool TestFunction::supported_inside(const EquilibriumMeasure& eqm, double margin) const {
    if (eqm.dim() != d_) return false;
    double dist = norm(center_, d_) + radius_;
    return dist < eqm.support_radius() - margin;
}

double xi_mean(const EquilibriumMeasure& eqm, const TestFunction& xi, double tol) {
    return eqm.integrate([&](const Vec& x) { return xi(x); }, tol);
}

double fluct_linear(const Configuration& config, const TestFunction& xi, double xi_mean_value) {
    KahanSum s;
    for (const Vec& p : config.points) s.add(xi(p));
    return s.value() - config.n() * xi_mean_value;
}

double fluct_linear(const Configuration& config, const EquilibriumMeasure& eqm,
                    const TestFunction& xi) {
    return fluct_linear(config, xi, xi_mean(eqm, xi));
}

VariancePrediction variance_prediction(const TestFunction& xi, double beta,
                                       const EquilibriumMeasure& eqm) {
    if (beta <= 0.0) throw std::domain_error("variance_prediction: beta > 0 required");
    if (eqm.kernel().kase != KernelCase::Log2)
        throw CapabilityError("variance_prediction: closed form available in the Log2 case only");
    if (!xi.supported_inside(eqm))
        throw CapabilityError(
            "variance_prediction: xi must be supported inside the support of mu "
            "(harmonic-extension branch not implemented)");
    VariancePrediction p;
    p.v_xi = xi.dirichlet_integral() / (2.0 * std::numbers::pi * beta);
    p.variance = p.v_xi;
    p.alt_convention = 2.0 * p.v_xi;
    return p;
}

LogMeanExp empirical_log_laplace(const std::vector<double>& fluct_values, double s) {
    return log_mean_exp(fluct_values, s);
}

double anisotropy_1d(const Configuration& config, const EquilibriumMeasure& eqm,
                     const TestFunction& psi, double tol) {
    if (config.d != 1 || eqm.dim() != 1)
        throw CapabilityError("anisotropy_1d: d = 1 only");
    auto q = [&](double x, double y) {
        if (std::abs(x - y) < 1e-7) return psi.grad(vec1(0.5 * (x + y)))[0];
        return (psi(vec1(x)) - psi(vec1(y))) / (x - y);
    };
    double n = config.n();
    // atomic block (diagonal = psi')
    KahanSum atomic;
    for (const Vec& a : config.points)
        for (const Vec& b : config.points) atomic.add(q(a[0], b[0]));
    // cross block
    KahanSum cross;
    for (const Vec& a : config.points) {
        double ia = eqm.integrate([&](const Vec& y) { return q(a[0], y[0]); }, tol / (4.0 * n));
        cross.add(ia);
    }
    // background block
    double bg = eqm.integrate(
        [&](const Vec& x) {
            return eqm.integrate([&](const Vec& y) { return q(x[0], y[0]); },
                                 tol / (4.0 * n * n));
        },
        tol / 4.0);
    return atomic.value() - 2.0 * n * cross.value() + n * n * bg;
}

CltReport clt_report(const std::vector<double>& fluct_values, double beta, int n,
                     const std::optional<VariancePrediction>& pred) {
    CltReport r;
    r.beta = beta;
    r.n = n;
    r.sample_size = fluct_values.size();
    BatchMeans bm = batch_means(fluct_values);
    r.sample_mean = bm.mean;
    r.se_mean = bm.se;
    double m = mean(fluct_values);
    std::vector<double> sq(fluct_values.size());
    for (size_t i = 0; i < sq.size(); ++i) sq[i] = (fluct_values[i] - m) * (fluct_values[i] - m);
    BatchMeans bv = batch_means(sq);
    r.sample_variance = variance(fluct_values);
    r.se_variance = bv.se;
    r.p_normal = dagostino_k2(fluct_values).p_value;
    r.ess = effective_sample_size(fluct_values);
    if (pred) {
        r.predicted_variance = pred->variance;
        r.predicted_variance_alt = pred->alt_convention;
    }
    return r;
}

ConcentrationRow concentration_row(const std::vector<double>& fn_values,
                                   const std::vector<double>& fluct_values, int n, double beta,
                                   int d, bool log_case) {
    if (fn_values.size() < 2)
        throw InsufficientDataError("concentration_row: need at least 2 samples");
    ConcentrationRow row;
    row.n = n;
    LogMeanExp lme = log_mean_exp(fn_values, 0.25 * beta);
    double shift = log_case ? 0.25 * beta * (static_cast<double>(n) / d) * std::log(n) : 0.0;
    row.exp_moment = (lme.value + shift) / n;
    row.se = lme.se / n;
    row.fluct_variance = fluct_values.size() >= 2 ? variance(fluct_values) : 0.0;
    return row;
}

LocalStatsReport local_statistics(const std::vector<Configuration>& samples,
                                  const EquilibriumMeasure& eqm, const std::vector<Vec>& tags,
                                  double window) {
    if (samples.empty()) throw InsufficientDataError("local_statistics: no samples");
    LocalStatsReport rep;
    int d = eqm.dim();
    double n = samples.front().n();
    double blow = std::pow(n, 1.0 / d);
    std::vector<double> gaps;
    for (const Vec& tag : tags) {
        // window must stay inside the support after blow-up
        Vec corner = tag;
        corner[0] += 0.5 * window / blow;
        Vec corner2 = tag;
        corner2[0] -= 0.5 * window / blow;
        if (!eqm.in_support(corner, -1e-9) || !eqm.in_support(corner2, -1e-9)) {
            ++rep.tags_skipped;
            continue;
        }
        ++rep.tags_used;
        for (const Configuration& cfg : samples) {
            std::vector<Vec> blown;
            std::vector<int> in_window;
            for (const Vec& p : cfg.points) {
                Vec y = scale(sub(p, tag, d), blow, d);
                bool inside = true;
                for (int a = 0; a < d; ++a) inside = inside && std::abs(y[a]) <= 0.5 * window;
                if (inside) in_window.push_back(static_cast<int>(blown.size()));
                blown.push_back(y);
            }
            for (int idx : in_window) {
                double best = std::numeric_limits<double>::infinity();
                for (size_t j = 0; j < blown.size(); ++j) {
                    if (static_cast<int>(j) == idx) continue;
                    best = std::min(best, norm(sub(blown[idx], blown[j], d), d));
                }
                if (std::isfinite(best)) rep.nn_distances.push_back(best);
            }
            if (d == 1 && in_window.size() >= 2) {
                std::vector<double> xs;
                for (int idx : in_window) xs.push_back(blown[static_cast<size_t>(idx)][0]);
                std::sort(xs.begin(), xs.end());
                for (size_t j = 1; j < xs.size(); ++j) gaps.push_back(xs[j] - xs[j - 1]);
            }
        }
    }
    if (!rep.nn_distances.empty()) rep.mean_nn = mean(rep.nn_distances);
    if (gaps.size() >= 2) rep.gap_variance = variance(gaps);
    return rep;
}

}  // namespace coulgas
