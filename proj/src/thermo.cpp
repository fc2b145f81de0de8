#include "coulgas/thermo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "coulgas/error.hpp"
#include "coulgas/stats.hpp"

namespace coulgas {

namespace {

constexpr double kPi = std::numbers::pi;

double leading_power(int d) { return std::min(2.0, 2.0 / d + 1.0); }

}  // namespace

double logz_closed_form(int n, double beta, int d, double a) {
    if (n < 1) throw std::domain_error("logz_closed_form: n >= 1 required");
    if (beta <= 0.0 || a <= 0.0)
        throw std::domain_error("logz_closed_form: beta > 0 and a > 0 required");
    if (n == 1) return 0.5 * d * std::log(2.0 * kPi / (a * beta));
    if (d == 1 && a == 0.5) {
        // Gaussian beta-ensemble (Selberg) under the NV confinement convention
        double s = -(0.5 * n + 0.25 * beta * n * (n - 1.0)) * std::log(0.5 * beta * n) +
                   0.5 * n * std::log(2.0 * kPi) - n * std::lgamma(1.0 + 0.5 * beta);
        for (int j = 1; j <= n; ++j) s += std::lgamma(1.0 + 0.5 * j * beta);
        return s;
    }
    if (d == 2 && a == 1.0 && beta == 2.0) {
        // Ginibre normalization product
        double s = std::lgamma(n + 1.0) + n * std::log(kPi) -
                   0.5 * n * (n + 1.0) * std::log(static_cast<double>(n));
        for (int k = 1; k <= n; ++k) s += std::lgamma(static_cast<double>(k));
        return s;
    }
    throw CapabilityError("logz_closed_form: no closed form for this (n, beta, d, a)");
}

MeanEnergy mean_energy_estimate(const GibbsParams& params,
                                const std::vector<Configuration>& samples) {
    params.validate();
    std::vector<double> h;
    h.reserve(samples.size());
    for (const Configuration& c : samples) h.push_back(hamiltonian(c, params.pot, params.kernel));
    MeanEnergy me;
    me.ess = effective_sample_size(h);
    if (me.ess < 20.0)
        throw InsufficientDataError("mean_energy_estimate: effective sample size below 20");
    BatchMeans bm = batch_means(h);
    me.value = bm.mean;
    me.se = bm.se;
    return me;
}

TiResult ti_reduce(double anchor_logz, const TiCurve& curve, double normalization) {
    size_t k = curve.betas.size();
    if (k < 3 || curve.energies.size() != k || curve.ses.size() != k)
        throw std::domain_error("ti_reduce: need >= 3 aligned curve nodes");
    for (size_t i = 1; i < k; ++i)
        if (!(curve.betas[i] > curve.betas[i - 1]) && !(curve.betas[i] < curve.betas[i - 1]))
            throw std::domain_error("ti_reduce: betas must be strictly monotone");
    auto trapezoid = [&](size_t stride) {
        double acc = 0.0;
        size_t prev = 0;
        for (size_t i = stride; i < k; i += stride) {
            acc += 0.5 * (curve.energies[prev] + curve.energies[i]) *
                   (curve.betas[i] - curve.betas[prev]);
            prev = i;
        }
        if (prev != k - 1)
            acc += 0.5 * (curve.energies[prev] + curve.energies[k - 1]) *
                   (curve.betas[k - 1] - curve.betas[prev]);
        return acc;
    };
    double fine = trapezoid(1);
    double coarse = trapezoid(2);
    double var = 0.0;
    for (size_t i = 0; i < k; ++i) {
        double wl = (i == 0) ? 0.0 : 0.5 * std::abs(curve.betas[i] - curve.betas[i - 1]);
        double wr = (i + 1 == k) ? 0.0 : 0.5 * std::abs(curve.betas[i + 1] - curve.betas[i]);
        double w = 0.5 * normalization * (wl + wr);
        var += w * w * curve.ses[i] * curve.ses[i];
    }
    TiResult r;
    r.curve = curve;
    r.value = anchor_logz - 0.5 * normalization * fine;
    r.error = std::abs(fine - coarse) / 3.0 * 0.5 * std::abs(normalization) + std::sqrt(var);
    return r;
}

TiResult logz_estimate_ti(const GibbsParams& params, double beta_anchor, double beta_target,
                          const TiOptions& opts) {
    params.validate();
    if (opts.nodes < 3) throw std::domain_error("logz_estimate_ti: need >= 3 beta nodes");
    int d = params.kernel.d;
    double anchor = logz_closed_form(params.n, beta_anchor, d, params.pot.a);
    if (beta_target == beta_anchor) {
        TiResult r;
        r.value = anchor;
        r.error = 0.0;
        return r;
    }
    TiCurve curve;
    curve.betas.resize(static_cast<size_t>(opts.nodes));
    curve.energies.resize(curve.betas.size());
    curve.ses.resize(curve.betas.size());
    for (int i = 0; i < opts.nodes; ++i)
        curve.betas[static_cast<size_t>(i)] =
            beta_anchor + (beta_target - beta_anchor) * i / (opts.nodes - 1);
    auto run_node = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            GibbsParams node = params;
            node.beta = curve.betas[i];
            McmcOptions mo;
            mo.sweeps = opts.sweeps;
            mo.burn_fraction = opts.burn_fraction;
            mo.thinning = opts.thinning;
            mo.seed = opts.seed;
            mo.stream_id = 0x7469ULL ^ (static_cast<std::uint64_t>(i) << 8);
            std::vector<Configuration> samples = mcmc_run(node, mo);
            MeanEnergy me = mean_energy_estimate(node, samples);
            curve.energies[i] = me.value;
            curve.ses[i] = me.se;
        }
    };
    int workers = std::max(1, opts.workers);
    if (workers == 1) {
        run_node(0, curve.betas.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (curve.betas.size() + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            size_t lo = std::min(curve.betas.size(), t * chunk);
            size_t hi = std::min(curve.betas.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(run_node, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    TiResult r = ti_reduce(anchor, curve, params.energy_normalization());
    if (opts.tolerance > 0.0 && r.error > opts.tolerance)
        throw NumericError("logz_estimate_ti: error estimate above tolerance", r.error);
    return r;
}

FreeEnergyReport expansion_fit(const std::vector<int>& ns, const std::vector<double>& logz,
                               const std::vector<double>& se, double beta, int d, double iv,
                               bool log_case) {
    size_t k = ns.size();
    size_t needed = log_case ? 4 : 3;
    if (k < needed || logz.size() != k)
        throw std::domain_error("expansion_fit: need aligned log Z values for >= 4 values of N");
    double p = leading_power(d);
    std::vector<double> c_lead(k), c_nlogn(k), c_n(k);
    for (size_t i = 0; i < k; ++i) {
        double n = ns[i];
        c_lead[i] = std::pow(n, p);
        c_nlogn[i] = n * std::log(n);
        c_n[i] = n;
    }
    std::vector<double> fit = log_case ? least_squares({c_lead, c_nlogn, c_n}, logz)
                                       : least_squares({c_lead, c_n}, logz);
    FreeEnergyReport rep;
    rep.ns = ns;
    rep.beta = beta;
    rep.logz = logz;
    rep.se = se.empty() ? std::vector<double>(k, 0.0) : se;
    rep.log_case = log_case;
    rep.coeff_leading = fit[0];
    rep.coeff_nlogn = log_case ? fit[1] : 0.0;
    rep.coeff_n = log_case ? fit[2] : fit[1];
    rep.predicted_leading = -0.5 * beta * iv;
    rep.predicted_nlogn = log_case ? 0.5 * beta / d : 0.0;
    rep.residuals.resize(k);
    for (size_t i = 0; i < k; ++i)
        rep.residuals[i] = logz[i] - rep.coeff_leading * c_lead[i] -
                           rep.coeff_nlogn * c_nlogn[i] - rep.coeff_n * c_n[i];
    return rep;
}

double upper_bound_constant(double logz, int n, double beta, int d, double iv, bool log_case) {
    double p = leading_power(d);
    double value = logz + 0.5 * beta * std::pow(n, p) * iv;
    if (log_case) value -= 0.5 * beta / d * n * std::log(n);
    return value / n;
}

}  // namespace coulgas
