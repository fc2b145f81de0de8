#pragma once

#include <vector>

#include "coulgas/equilibrium.hpp"
#include "coulgas/kernel.hpp"
#include "coulgas/vec.hpp"

namespace coulgas {

// An N-tuple of points in R^d, the fundamental state.
struct Configuration {
    int d = 1;
    std::vector<Vec> points;

    int n() const { return static_cast<int>(points.size()); }
    void validate() const;  // finite coordinates, N >= 1
};

// Per-point truncation radii eta_i in (0, 1/2].
struct TruncationVector {
    std::vector<double> radii;

    static TruncationVector uniform(int n, double eta);
    // Default eta_i = min(1/4 N^{-1/d}, 1/2).
    static TruncationVector default_for(int n, int d);
    void validate(int n) const;
};

// True when the balls B(x_i, eta_i) are pairwise disjoint.
bool truncation_balls_disjoint(const Configuration& config, const TruncationVector& trunc);

// Sum over ordered pairs of g(x_i - x_j): each unordered pair counted twice.
// Summation runs in a canonical (sorted-point) order with Kahan compensation,
// so the value is bit-exact under permutations of the input.
double interaction_energy(const Configuration& config, const KernelSpec& kernel);

// H_N = sum_{i != j} g(x_i - x_j) + N sum_i V(x_i).
double hamiltonian(const Configuration& config, const PotentialSpec& pot,
                   const KernelSpec& kernel);

// O(N) energy change for moving point i to newpos.  Returns +inf when the
// move would create a coincident pair (callers treat that as auto-reject).
double hamiltonian_delta(const Configuration& config, const PotentialSpec& pot,
                         const KernelSpec& kernel, int i, const Vec& newpos);

// F_N = sum_{i != j} g(x_i - x_j) - 2N sum_i h^mu(x_i) + N^2 (I_V - int V dmu).
double next_order_energy(const Configuration& config, const EquilibriumMeasure& eqm,
                         const KernelSpec& kernel);

// H_N - (N^2 I_V + 2N sum_i zeta(x_i) + F_N); algebraically zero.
double splitting_residual(const Configuration& config, const PotentialSpec& pot,
                          const EquilibriumMeasure& eqm, const KernelSpec& kernel);

// #{i : x_i in B_r(x)} - N mu(B_r(x)).
double discrepancy(const Configuration& config, const EquilibriumMeasure& eqm, const Vec& center,
                   double r);

}  // namespace coulgas
