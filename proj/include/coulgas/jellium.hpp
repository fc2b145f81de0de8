#pragma once

#include <vector>

#include "coulgas/kernel.hpp"
#include "coulgas/vec.hpp"

namespace coulgas {

// Bravais lattice defining the periodicity torus.
struct LatticeSpec {
    int d = 2;
    Vec basis[3]{};  // basis[0..d-1] span the fundamental cell

    static LatticeSpec chain(double length);                 // d = 1
    static LatticeSpec from_tau(double tau_re, double tau_im);  // unimodular, d = 2
    static LatticeSpec square();
    static LatticeSpec triangular();
    static LatticeSpec cubic(double side);                   // d = 3
    static LatticeSpec scaled(const LatticeSpec& cell, double factor);

    double volume() const;  // |det(basis)|
    void validate() const;
};

// Point configuration on the torus with a constant neutralizing background.
struct PeriodicConfig {
    LatticeSpec cell;
    std::vector<Vec> points;
    double m = 1.0;  // background density (points per unit cell volume)

    int n() const { return static_cast<int>(points.size()); }
    // neutrality: point count = m * volume, integer; never silently corrected
    void validate() const;
};

// Zero-mean periodic Green function (Ewald split away from lattice copies of
// the singularity). alpha = 0 selects the splitting parameter automatically.
double periodic_green(const LatticeSpec& cell, const KernelSpec& kernel, const Vec& x,
                      double alpha = 0.0);

// Madelung-type constant K = lim_{x->0} (G(x) - g(x)).
double madelung_constant(const LatticeSpec& cell, const KernelSpec& kernel, double alpha = 0.0);

// Renormalized energy per unit volume at eta -> 0 (direct Ewald value).
double jellium_energy(const PeriodicConfig& pc, const KernelSpec& kernel, double alpha = 0.0);

// Truncated energy (1/|T|)(int |E_eta|^2 - n c_d g(eta)): the pair sum of the
// sphere-smeared Green function, evaluated by its exact spherical means.
double truncated_energy(const PeriodicConfig& pc, const KernelSpec& kernel, double eta,
                        double alpha = 0.0);

struct RenormEnergyResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::vector<double> etas;
    std::vector<double> w_eta;
};

// Extrapolate truncated energies over a decreasing eta sequence (eta for the
// 1D strip trend, eta^2 otherwise); reports the extrapolation error.
RenormEnergyResult renorm_energy_periodic(const PeriodicConfig& pc, const KernelSpec& kernel,
                                          const std::vector<double>& eta_sequence);

// Scale the density out: Log cases m W - (2 pi / d) m log m; Coul m^{2-2/d} W.
double scale_renorm(double w_value, double m, const KernelSpec& kernel);

struct LatticeScanPoint {
    double tau_re = 0.0;
    double tau_im = 0.0;
    double w = 0.0;
};

struct LatticeScanResult {
    std::vector<LatticeScanPoint> grid;
    LatticeScanPoint argmin;
};

// W over an (nx x ny) grid of unimodular lattices tau in the fundamental
// domain (re in [0, 1/2], im in [sqrt(3)/2, im_max], |tau| >= 1).
LatticeScanResult lattice_scan_2d(int nx, int ny, double im_max = 2.0, int workers = 1);

}  // namespace coulgas
