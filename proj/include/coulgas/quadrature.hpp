#pragma once

#include <cmath>
#include <functional>

#include "coulgas/error.hpp"

namespace coulgas {

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, double min_width, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    // Accept once the interval is negligibly thin: integrable singularities
    // and jump points otherwise recurse forever at a vanishing contribution.
    if (b - a <= min_width) return left + right + delta / 15.0;
    if (depth <= 0) throw NumericError("adaptive_simpson: max depth reached", std::abs(delta));
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, min_width, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, min_width, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature to absolute tolerance tol. The range is
// pre-split into a few panels so that symmetric integrands vanishing at the
// endpoints and midpoint cannot fool the termination test.
template <class F>
double integrate(const F& f, double a, double b, double tol = 1e-10, int max_depth = 60) {
    if (a == b) return 0.0;
    const int panels = 7;  // odd and coprime to 2: avoids node coincidences
    double min_width = std::abs(b - a) * 1e-12;
    double h = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        double lo = a + i * h, hi = (i + 1 == panels) ? b : a + (i + 1) * h;
        double flo = f(lo), fhi = f(hi), fm = f(0.5 * (lo + hi));
        double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
        total += detail::adaptive_simpson_rec(f, lo, hi, flo, fm, fhi, whole, tol / panels,
                                              min_width, max_depth);
    }
    return total;
}

// Iterated 2D integral over [ax,bx] x [ay,by].
template <class F2>
double integrate2d(const F2& f, double ax, double bx, double ay, double by, double tol = 1e-9) {
    auto outer = [&](double x) {
        return integrate([&](double y) { return f(x, y); }, ay, by, tol * 0.1);
    };
    return integrate(outer, ax, bx, tol);
}

}  // namespace coulgas
