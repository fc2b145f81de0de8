#include "coulgas/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "coulgas/error.hpp"

namespace coulgas {

void Configuration::validate() const {
    if (points.empty()) throw std::domain_error("Configuration: N >= 1 required");
    if (d < 1 || d > 3) throw std::domain_error("Configuration: d in {1,2,3} required");
    for (const Vec& p : points)
        for (int k = 0; k < d; ++k)
            if (!std::isfinite(p[k]))
                throw std::domain_error("Configuration: non-finite coordinate");
}

TruncationVector TruncationVector::uniform(int n, double eta) {
    TruncationVector t;
    t.radii.assign(static_cast<size_t>(n), eta);
    t.validate(n);
    return t;
}

TruncationVector TruncationVector::default_for(int n, int d) {
    double eta = 0.25 * std::pow(static_cast<double>(n), -1.0 / d);
    return uniform(n, std::min(eta, 0.5));
}

void TruncationVector::validate(int n) const {
    if (static_cast<int>(radii.size()) != n)
        throw std::domain_error("TruncationVector: length must equal N");
    for (double e : radii)
        if (!(e > 0.0 && e <= 0.5))
            throw std::domain_error("TruncationVector: radii must lie in (0, 1/2]");
}

bool truncation_balls_disjoint(const Configuration& config, const TruncationVector& trunc) {
    trunc.validate(config.n());
    int n = config.n();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double r = norm(sub(config.points[i], config.points[j], config.d), config.d);
            if (r < trunc.radii[i] + trunc.radii[j]) return false;
        }
    return true;
}

namespace {

// Canonical point order: lexicographic by coordinates.  Summing pair terms in
// this order makes the energies bit-exact under permutations of the input.
std::vector<int> canonical_order(const Configuration& config) {
    std::vector<int> idx(config.points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return config.points[a] < config.points[b];
    });
    return idx;
}

[[noreturn]] void throw_coincident(int i, int j) {
    throw SingularityError("coincident points at indices " + std::to_string(i) + ", " +
                           std::to_string(j));
}

}  // namespace

double interaction_energy(const Configuration& config, const KernelSpec& kernel) {
    config.validate();
    std::vector<int> idx = canonical_order(config);
    int n = config.n();
    KahanSum acc;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            int i = idx[a], j = idx[b];
            double r = norm(sub(config.points[i], config.points[j], config.d), config.d);
            if (r == 0.0) throw_coincident(i, j);
            acc.add(2.0 * g_eval(kernel, r));
        }
    return acc.value();
}

double hamiltonian(const Configuration& config, const PotentialSpec& pot,
                   const KernelSpec& kernel) {
    double pair_sum = interaction_energy(config, kernel);
    std::vector<int> idx = canonical_order(config);
    KahanSum vsum;
    for (int i : idx) vsum.add(pot(config.points[i], config.d));
    return pair_sum + config.n() * vsum.value();
}

double hamiltonian_delta(const Configuration& config, const PotentialSpec& pot,
                         const KernelSpec& kernel, int i, const Vec& newpos) {
    int n = config.n();
    int d = config.d;
    const Vec& old = config.points[i];
    KahanSum acc;
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        double rn = norm(sub(newpos, config.points[j], d), d);
        if (rn == 0.0) return std::numeric_limits<double>::infinity();
        double ro = norm(sub(old, config.points[j], d), d);
        acc.add(2.0 * (g_eval(kernel, rn) - g_eval(kernel, ro)));
    }
    return acc.value() + n * (pot(newpos, d) - pot(old, d));
}

double next_order_energy(const Configuration& config, const EquilibriumMeasure& eqm,
                         const KernelSpec& kernel) {
    double pair_sum = interaction_energy(config, kernel);
    std::vector<int> idx = canonical_order(config);
    KahanSum hsum;
    for (int i : idx) hsum.add(eqm.h(config.points[i]));
    double n = config.n();
    return pair_sum - 2.0 * n * hsum.value() + n * n * eqm.mean_g_energy();
}

double splitting_residual(const Configuration& config, const PotentialSpec& pot,
                          const EquilibriumMeasure& eqm, const KernelSpec& kernel) {
    if (eqm.potential().a != pot.a)
        throw std::invalid_argument("splitting_residual: equilibrium measure was built for a "
                                    "different potential");
    double h = hamiltonian(config, pot, kernel);
    double f = next_order_energy(config, eqm, kernel);
    std::vector<int> idx = canonical_order(config);
    KahanSum zsum;
    for (int i : idx) zsum.add(eqm.zeta(config.points[i]));
    double n = config.n();
    return h - (n * n * eqm.iv() + 2.0 * n * zsum.value() + f);
}

double discrepancy(const Configuration& config, const EquilibriumMeasure& eqm, const Vec& center,
                   double r) {
    if (r <= 0.0) throw std::domain_error("discrepancy: r > 0 required");
    int count = 0;
    for (const Vec& p : config.points)
        if (norm(sub(p, center, config.d), config.d) <= r) ++count;
    return count - config.n() * eqm.mass_in_ball(center, r);
}

}  // namespace coulgas
