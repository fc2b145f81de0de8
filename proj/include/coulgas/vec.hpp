#pragma once

#include <array>
#include <cmath>
#include <span>

namespace coulgas {

// Fixed-capacity point in R^d, d <= 3.  The active dimension is carried by
// the surrounding context (KernelSpec / Configuration).
using Vec = std::array<double, 3>;

inline Vec vec1(double x) { return {x, 0.0, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y, 0.0}; }
inline Vec vec3(double x, double y, double z) { return {x, y, z}; }

inline double dot(const Vec& a, const Vec& b, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a, int d) { return dot(a, a, d); }
inline double norm(const Vec& a, int d) { return std::sqrt(norm2(a, d)); }

inline Vec sub(const Vec& a, const Vec& b, int d) {
    Vec r{0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec add(const Vec& a, const Vec& b, int d) {
    Vec r{0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec scale(const Vec& a, double t, int d) {
    Vec r{0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) r[i] = t * a[i];
    return r;
}

// Compensated (Kahan) accumulator.  Pair sums use a fixed i-major order with
// this accumulator so results are reproducible across thread counts.
class KahanSum {
  public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace coulgas
