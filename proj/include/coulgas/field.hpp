#pragma once

#include <vector>

#include "coulgas/energy.hpp"
#include "coulgas/equilibrium.hpp"

namespace coulgas {

struct GridParams {
    double spacing = 0.0;     // 0 = auto (diam/512 in 2D, diam/64 in 3D)
    double pad_factor = 3.0;  // box margin as a multiple of the configuration diameter
    int sample_res = 129;     // nodes per axis of the stored sample array
};

// Truncated electric potential H_{N,eta} and its gradient, with a sampled
// regular grid for export.  For Log1 the field lives in the extended plane
// (charges on the real axis), so the field dimension is 2; otherwise it is d.
class GridField {
  public:
    static GridField make(const Configuration& config, const EquilibriumMeasure& eqm,
                          const TruncationVector& trunc, const GridParams& params = {});

    int field_dim() const { return field_dim_; }
    double spacing() const { return spacing_; }
    const Vec& box_lo() const { return box_lo_; }
    const Vec& box_hi() const { return box_hi_; }
    const Configuration& config() const { return config_; }
    const EquilibriumMeasure& eqm() const { return eqm_; }
    const TruncationVector& trunc() const { return trunc_; }
    double diameter() const { return diam_; }
    Vec centroid() const { return centroid_; }

    // H_{N,eta}(x) = sum_i min(g(|x-x_i|), g(eta_i)) - N h^mu(x).
    double value(const Vec& x) const;
    // Gradient: sum over charges with |x-x_i| >= eta_i of grad g, minus N grad h^mu.
    Vec gradient(const Vec& x) const;

    // Stored regular samples (row-major over the field dimensions).
    int sample_res() const { return sample_res_; }
    const std::vector<double>& sampled_values() const { return values_; }
    int nudged_nodes() const { return nudged_; }

  private:
    Configuration config_;
    EquilibriumMeasure eqm_;
    TruncationVector trunc_;
    int field_dim_ = 2;
    double spacing_ = 0.0;
    double diam_ = 0.0;
    Vec box_lo_{}, box_hi_{}, centroid_{};
    int sample_res_ = 0;
    std::vector<double> values_;
    int nudged_ = 0;

    GridField(const Configuration& c, const EquilibriumMeasure& e, const TruncationVector& t)
        : config_(c), eqm_(e), trunc_(t) {}
};

struct ElectricEnergyResult {
    double value = 0.0;           // (1/c_d)(int |grad H_eta|^2 - c_d sum g(eta_i))
    double error_estimate = 0.0;  // Richardson discretization estimate + tail bound
    double field_integral = 0.0;  // int |grad H_eta|^2 at the finer resolution
    double tail = 0.0;            // dipole far-field correction included above
};

// Electric energy by midpoint quadrature: polar patches around the charges
// (cell edges aligned with the truncation spheres), a cartesian bulk grid with
// exact cell/patch overlap weights, and a dipole tail beyond the box.
// Throws NumericError when the error estimate exceeds tol.
ElectricEnergyResult electric_energy(const GridField& field, double tol);

// Exact area of circle(center, r) intersected with [x0,x1] x [y0,y1].
double circle_rect_overlap_area(double cx, double cy, double r, double x0, double x1, double y0,
                                double y1);

}  // namespace coulgas
