#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coulgas/energy.hpp"
#include "coulgas/equilibrium.hpp"
#include "coulgas/rng.hpp"

namespace coulgas {

// Target Gibbs measure dP ~ exp(-(beta/2) N^kappa H_N) with
// kappa = min(2/d - 1, 0)  (0 for d in {1,2}).
struct GibbsParams {
    double beta = 2.0;
    int n = 1;
    KernelSpec kernel = KernelSpec::log2();
    PotentialSpec pot{};

    double energy_normalization() const;
    void validate() const;
};

struct ChainState {
    Configuration config;
    double proposal_scale = 0.1;
    std::mt19937_64 rng;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    long long accepted = 0;
    long long proposed = 0;
    long long sweep = 0;

    double acceptance_rate() const {
        return proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
    }
};

struct McmcOptions {
    long long sweeps = 1000;
    double burn_fraction = 0.2;  // adaptation happens only here
    int thinning = 1;            // sweeps between emitted samples
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

// The exact Metropolis acceptance probability used by the chain.
double metropolis_accept_probability(const GibbsParams& params, const Configuration& config,
                                     int i, const Vec& newpos);

// Fresh chain state: points i.i.d. from mu_V when available, else Gaussian.
ChainState init_chain(const GibbsParams& params, const McmcOptions& opts);

// Run sweeps from `state` (in place), appending post-burn-in thinned samples.
void mcmc_continue(const GibbsParams& params, ChainState& state, long long sweeps,
                   long long burn_sweeps, int thinning, std::vector<Configuration>& out);

// Full run: init, burn-in with Robbins-Monro adaptation to acceptance 0.3,
// then frozen kernel; returns the thinned sample stream.
std::vector<Configuration> mcmc_run(const GibbsParams& params, const McmcOptions& opts,
                                    ChainState* final_state = nullptr);

// Eigenvalues of an NxN complex Gaussian matrix with entry variance 1/N:
// the beta=2, V=|x|^2 log-gas in d=2 (circle law).
Configuration sample_ginibre(int n, std::uint64_t seed, std::uint64_t stream_id = 0);

// Rescaled tridiagonal beta-ensemble: the d=1 log-gas at inverse temperature
// beta with V = x^2/2 (semicircle on [-2,2]).
Configuration sample_beta_tridiag(int n, double beta, std::uint64_t seed,
                                  std::uint64_t stream_id = 0);

// Versioned text checkpoint with params snapshot, RNG state, configuration.
void save_checkpoint(const std::string& path, const GibbsParams& params, const ChainState& state);
struct Checkpoint {
    GibbsParams params;
    ChainState state;
};
Checkpoint load_checkpoint(const std::string& path);

}  // namespace coulgas
