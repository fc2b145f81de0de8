#include "coulgas/sampler.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "coulgas/error.hpp"

namespace coulgas {

double GibbsParams::energy_normalization() const {
    return std::pow(static_cast<double>(n), std::min(2.0 / kernel.d - 1.0, 0.0));
}

void GibbsParams::validate() const {
    if (beta <= 0.0) throw std::domain_error("GibbsParams: beta > 0 required");
    if (n < 1) throw std::domain_error("GibbsParams: N >= 1 required");
    kernel.validate();
    pot.validate();
}

double metropolis_accept_probability(const GibbsParams& params, const Configuration& config,
                                     int i, const Vec& newpos) {
    double dh = hamiltonian_delta(config, params.pot, params.kernel, i, newpos);
    if (!std::isfinite(dh)) return dh > 0.0 ? 0.0 : 1.0;
    double logr = -0.5 * params.beta * params.energy_normalization() * dh;
    return logr >= 0.0 ? 1.0 : std::exp(logr);
}

ChainState init_chain(const GibbsParams& params, const McmcOptions& opts) {
    params.validate();
    ChainState st;
    st.seed = opts.seed;
    st.stream_id = opts.stream_id;
    st.rng = make_stream(opts.seed, opts.stream_id);
    st.config.d = params.kernel.d;
    st.config.points.resize(static_cast<size_t>(params.n));
    bool have_eqm = true;
    try {
        EquilibriumMeasure eqm = EquilibriumMeasure::make(params.pot, params.kernel);
        for (auto& p : st.config.points) p = eqm.sample(st.rng);
    } catch (const CapabilityError&) {
        have_eqm = false;
    }
    if (!have_eqm) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (auto& p : st.config.points)
            for (int a = 0; a < st.config.d; ++a) p[a] = gauss(st.rng);
    }
    // typical interparticle spacing as the initial proposal scale
    st.proposal_scale = std::pow(static_cast<double>(params.n), -1.0 / params.kernel.d);
    return st;
}

void mcmc_continue(const GibbsParams& params, ChainState& state, long long sweeps,
                   long long burn_sweeps, int thinning, std::vector<Configuration>& out) {
    int n = params.n;
    int d = params.kernel.d;
    double half_beta_norm = 0.5 * params.beta * params.energy_normalization();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (long long s = 0; s < sweeps; ++s) {
        long long acc_sweep = 0;
        for (int i = 0; i < n; ++i) {
            Vec prop = state.config.points[static_cast<size_t>(i)];
            for (int a = 0; a < d; ++a) prop[a] += state.proposal_scale * gauss(state.rng);
            double dh = hamiltonian_delta(state.config, params.pot, params.kernel, i, prop);
            ++state.proposed;
            double u = unif(state.rng);
            if (std::isfinite(dh) && u < std::exp(std::min(0.0, -half_beta_norm * dh))) {
                state.config.points[static_cast<size_t>(i)] = prop;
                ++state.accepted;
                ++acc_sweep;
            }
        }
        ++state.sweep;
        if (state.sweep <= burn_sweeps) {
            // Robbins-Monro drive toward acceptance 0.3, frozen after burn-in
            double rate = static_cast<double>(acc_sweep) / n;
            double gain = std::pow(static_cast<double>(state.sweep), -0.6);
            state.proposal_scale *= std::exp(gain * (rate - 0.3));
        } else if ((state.sweep - burn_sweeps) % thinning == 0) {
            out.push_back(state.config);
        }
    }
}

std::vector<Configuration> mcmc_run(const GibbsParams& params, const McmcOptions& opts,
                                    ChainState* final_state) {
    if (opts.sweeps < 1) throw std::domain_error("mcmc_run: sweeps >= 1 required");
    if (opts.thinning < 1) throw std::domain_error("mcmc_run: thinning >= 1 required");
    ChainState st = init_chain(params, opts);
    long long burn = static_cast<long long>(opts.burn_fraction * opts.sweeps);
    std::vector<Configuration> out;
    mcmc_continue(params, st, opts.sweeps, burn, opts.thinning, out);
    if (final_state) *final_state = std::move(st);
    return out;
}

Configuration sample_ginibre(int n, std::uint64_t seed, std::uint64_t stream_id) {
    if (n < 1) throw std::domain_error("sample_ginibre: N >= 1 required");
    std::mt19937_64 rng = make_stream(seed, 0x61726269ULL ^ stream_id);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 / n));  // E|z|^2 = 1/N
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    if (es.info() != Eigen::Success) throw NumericError("sample_ginibre: eigensolver failed", 0.0);
    Configuration cfg;
    cfg.d = 2;
    cfg.points.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        cfg.points.push_back(vec2(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag()));
    return cfg;
}

Configuration sample_beta_tridiag(int n, double beta, std::uint64_t seed,
                                  std::uint64_t stream_id) {
    if (n < 1) throw std::domain_error("sample_beta_tridiag: N >= 1 required");
    if (beta <= 0.0) throw std::domain_error("sample_beta_tridiag: beta > 0 required");
    std::mt19937_64 rng = make_stream(seed, 0x74726964ULL ^ stream_id);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd diag(n), sub(std::max(0, n - 1));
    // (1/sqrt2) tridiag(N(0,2); chi_{beta(n-k)}): eigenvalue density
    // |Delta|^beta exp(-sum lambda^2/2); rescale matches V = x^2/2.
    for (int i = 0; i < n; ++i) diag(i) = gauss(rng);
    for (int k = 1; k < n; ++k) {
        std::gamma_distribution<double> gam(0.5 * beta * (n - k), 2.0);
        sub(k - 1) = std::sqrt(gam(rng)) / std::sqrt(2.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericError("sample_beta_tridiag: eigensolver failed", 0.0);
    double scale = std::sqrt(2.0 / (beta * n));
    Configuration cfg;
    cfg.d = 1;
    cfg.points.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) cfg.points.push_back(vec1(scale * es.eigenvalues()(i)));
    return cfg;
}

void save_checkpoint(const std::string& path, const GibbsParams& params, const ChainState& state) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    out.precision(17);
    out << "coulgas-checkpoint 1\n";
    out << to_string(params.kernel.kase) << ' ' << params.kernel.d << ' ' << params.kernel.s
        << '\n';
    out << params.beta << ' ' << params.n << ' ' << params.pot.a << '\n';
    out << state.seed << ' ' << state.stream_id << ' ' << state.proposal_scale << ' '
        << state.accepted << ' ' << state.proposed << ' ' << state.sweep << '\n';
    out << state.rng << '\n';
    out << state.config.d << ' ' << state.config.points.size() << '\n';
    for (const Vec& p : state.config.points) {
        for (int a = 0; a < state.config.d; ++a) out << p[a] << (a + 1 < state.config.d ? ' ' : '\n');
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "coulgas-checkpoint" || version != 1)
        throw std::runtime_error("load_checkpoint: unrecognized header in " + path);
    Checkpoint cp;
    std::string kase;
    in >> kase >> cp.params.kernel.d >> cp.params.kernel.s;
    cp.params.kernel.kase = kernel_case_from_string(kase);
    in >> cp.params.beta >> cp.params.n >> cp.params.pot.a;
    in >> cp.state.seed >> cp.state.stream_id >> cp.state.proposal_scale >> cp.state.accepted >>
        cp.state.proposed >> cp.state.sweep;
    in >> cp.state.rng;
    size_t npts = 0;
    in >> cp.state.config.d >> npts;
    cp.state.config.points.assign(npts, Vec{0.0, 0.0, 0.0});
    for (Vec& p : cp.state.config.points)
        for (int a = 0; a < cp.state.config.d; ++a) in >> p[a];
    if (!in) throw std::runtime_error("load_checkpoint: truncated file " + path);
    cp.params.validate();
    return cp;
}

}  // namespace coulgas
