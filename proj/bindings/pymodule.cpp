#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "coulgas/acceptance.hpp"
#include "coulgas/energy.hpp"
#include "coulgas/equilibrium.hpp"
#include "coulgas/error.hpp"
#include "coulgas/experiment.hpp"
#include "coulgas/fluct.hpp"
#include "coulgas/jellium.hpp"
#include "coulgas/kernel.hpp"
#include "coulgas/sampler.hpp"
#include "coulgas/thermo.hpp"

namespace py = pybind11;
using namespace coulgas;

namespace {

using PointList = std::vector<std::vector<double>>;

Configuration to_config(const PointList& points, int d) {
    Configuration c;
    c.d = d;
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) < d)
            throw std::invalid_argument("point has fewer than d coordinates");
        Vec v{0.0, 0.0, 0.0};
        for (int k = 0; k < d; ++k) v[static_cast<size_t>(k)] = p[static_cast<size_t>(k)];
        c.points.push_back(v);
    }
    c.validate();
    return c;
}

PointList from_config(const Configuration& c) {
    PointList out;
    for (const Vec& v : c.points) {
        std::vector<double> p(v.begin(), v.begin() + c.d);
        out.push_back(p);
    }
    return out;
}

KernelSpec make_kernel(const std::string& name, double riesz_s) {
    KernelCase kc = kernel_case_from_string(name);
    switch (kc) {
        case KernelCase::Log1: return KernelSpec::log1();
        case KernelCase::Log2: return KernelSpec::log2();
        case KernelCase::Coul: return KernelSpec::coul(3);
        case KernelCase::Riesz: return KernelSpec::riesz(1, riesz_s);
    }
    throw std::invalid_argument("unknown kernel: " + name);
}

GibbsParams make_params(double beta, int n, const std::string& kernel, double a, double riesz_s) {
    GibbsParams p;
    p.beta = beta;
    p.n = n;
    p.kernel = make_kernel(kernel, riesz_s);
    p.pot = PotentialSpec{a};
    p.validate();
    return p;
}

PeriodicConfig lattice_config(const std::string& lattice, double tau_re, double tau_im,
                              double chain_length, double m) {
    if (lattice == "square") return PeriodicConfig{LatticeSpec::square(), {vec2(0, 0)}, m};
    if (lattice == "triangular")
        return PeriodicConfig{LatticeSpec::triangular(), {vec2(0, 0)}, m};
    if (lattice == "tau")
        return PeriodicConfig{LatticeSpec::from_tau(tau_re, tau_im), {vec2(0, 0)}, m};
    if (lattice == "chain")
        return PeriodicConfig{LatticeSpec::chain(chain_length), {vec1(0.0)}, m};
    if (lattice == "cubic") return PeriodicConfig{LatticeSpec::cubic(1.0), {vec3(0, 0, 0)}, m};
    throw std::invalid_argument("unknown lattice: " + lattice);
}

KernelSpec lattice_kernel(const std::string& lattice) {
    if (lattice == "chain") return KernelSpec::log1();
    if (lattice == "cubic") return KernelSpec::coul(3);
    return KernelSpec::log2();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "log/Coulomb gas numerical laboratory (C++ core)";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    // --- kernels & equilibrium ------------------------------------------------
    m.def(
        "kernel_eval",
        [](const std::string& kernel, const std::vector<double>& x, double riesz_s) {
            KernelSpec k = make_kernel(kernel, riesz_s);
            Vec v{0.0, 0.0, 0.0};
            for (size_t i = 0; i < x.size() && i < 3; ++i) v[i] = x[i];
            return g_eval(k, norm(v, k.d));
        },
        py::arg("kernel"), py::arg("x"), py::arg("riesz_s") = 0.5,
        "Evaluate the interaction kernel g at a point.");

    m.def(
        "equilibrium_summary",
        [](const std::string& kernel, double a) {
            EquilibriumMeasure eqm =
                EquilibriumMeasure::make(PotentialSpec{a}, make_kernel(kernel, 0.5));
            py::dict out;
            out["case"] = to_string(eqm.descriptor());
            out["support_radius"] = eqm.support_radius();
            out["density_sup"] = eqm.density_sup();
            out["iv"] = eqm.iv();
            out["int_v_dmu"] = eqm.int_v_dmu();
            out["entropy_integral"] = eqm.entropy_integral();
            return out;
        },
        py::arg("kernel"), py::arg("a") = 1.0,
        "Closed-form equilibrium measure quantities for V(x) = a|x|^2.");

    // --- energies -------------------------------------------------------------
    m.def(
        "hamiltonian",
        [](const PointList& points, int d, const std::string& kernel, double a) {
            Configuration c = to_config(points, d);
            return coulgas::hamiltonian(c, PotentialSpec{a}, make_kernel(kernel, 0.5));
        },
        py::arg("points"), py::arg("d"), py::arg("kernel"), py::arg("a") = 1.0,
        "H_N = sum_{i != j} g(x_i - x_j) + N sum_i V(x_i).");

    m.def(
        "splitting_residual",
        [](const PointList& points, int d, const std::string& kernel, double a) {
            KernelSpec k = make_kernel(kernel, 0.5);
            PotentialSpec pot{a};
            EquilibriumMeasure eqm = EquilibriumMeasure::make(pot, k);
            Configuration c = to_config(points, d);
            return coulgas::splitting_residual(c, pot, eqm, k);
        },
        py::arg("points"), py::arg("d"), py::arg("kernel"), py::arg("a") = 1.0,
        "H_N - (N^2 I_V + 2N sum zeta + F_N); exact splitting identity check.");

    m.def(
        "next_order_energy",
        [](const PointList& points, int d, const std::string& kernel, double a) {
            KernelSpec k = make_kernel(kernel, 0.5);
            EquilibriumMeasure eqm = EquilibriumMeasure::make(PotentialSpec{a}, k);
            return coulgas::next_order_energy(to_config(points, d), eqm, k);
        },
        py::arg("points"), py::arg("d"), py::arg("kernel"), py::arg("a") = 1.0);

    // --- sampling -------------------------------------------------------------
    m.def(
        "mcmc_sample",
        [](double beta, int n, const std::string& kernel, double a, long long sweeps,
           int thinning, double burn_fraction, std::uint64_t seed) {
            GibbsParams p = make_params(beta, n, kernel, a, 0.5);
            McmcOptions o;
            o.sweeps = sweeps;
            o.thinning = thinning;
            o.burn_fraction = burn_fraction;
            o.seed = seed;
            std::vector<Configuration> samples = mcmc_run(p, o);
            std::vector<PointList> out;
            out.reserve(samples.size());
            for (const Configuration& s : samples) out.push_back(from_config(s));
            return out;
        },
        py::arg("beta"), py::arg("n"), py::arg("kernel"), py::arg("a") = 1.0,
        py::arg("sweeps") = 2000, py::arg("thinning") = 1, py::arg("burn_fraction") = 0.2,
        py::arg("seed") = 1, "Metropolis samples from the Gibbs measure.");

    m.def(
        "sample_ginibre",
        [](int n, std::uint64_t seed) { return from_config(sample_ginibre(n, seed)); },
        py::arg("n"), py::arg("seed") = 1);

    m.def(
        "sample_beta_tridiag",
        [](int n, double beta, std::uint64_t seed) {
            return from_config(sample_beta_tridiag(n, beta, seed));
        },
        py::arg("n"), py::arg("beta"), py::arg("seed") = 1);

    // --- fluctuations ---------------------------------------------------------
    m.def(
        "fluct_linear",
        [](const PointList& points, int d, const std::string& kernel, double a,
           const std::vector<double>& center, double r_inner, double r_outer) {
            KernelSpec k = make_kernel(kernel, 0.5);
            EquilibriumMeasure eqm = EquilibriumMeasure::make(PotentialSpec{a}, k);
            Vec c{0.0, 0.0, 0.0};
            for (size_t i = 0; i < center.size() && i < 3; ++i) c[i] = center[i];
            TestFunction xi = TestFunction::radial_bump(c, r_inner, r_outer, d);
            return coulgas::fluct_linear(to_config(points, d), eqm, xi);
        },
        py::arg("points"), py::arg("d"), py::arg("kernel"), py::arg("a"), py::arg("center"),
        py::arg("r_inner"), py::arg("r_outer"),
        "Fluct_N(xi) for a radial bump test function.");

    m.def(
        "variance_prediction",
        [](double beta, double a, const std::vector<double>& center, double r_inner,
           double r_outer) {
            EquilibriumMeasure eqm =
                EquilibriumMeasure::make(PotentialSpec{a}, KernelSpec::log2());
            Vec c{0.0, 0.0, 0.0};
            for (size_t i = 0; i < center.size() && i < 2; ++i) c[i] = center[i];
            TestFunction xi = TestFunction::radial_bump(c, r_inner, r_outer, 2);
            VariancePrediction p = coulgas::variance_prediction(xi, beta, eqm);
            py::dict out;
            out["v_xi"] = p.v_xi;
            out["variance"] = p.variance;
            out["alt_convention"] = p.alt_convention;
            return out;
        },
        py::arg("beta"), py::arg("a"), py::arg("center"), py::arg("r_inner"),
        py::arg("r_outer"), "Predicted CLT variance for a radial bump (d = 2).");

    // --- jellium --------------------------------------------------------------
    m.def(
        "jellium_energy",
        [](const std::string& lattice, double tau_re, double tau_im, double chain_length,
           double m) {
            PeriodicConfig pc = lattice_config(lattice, tau_re, tau_im, chain_length, m);
            return coulgas::jellium_energy(pc, lattice_kernel(lattice));
        },
        py::arg("lattice"), py::arg("tau_re") = 0.0, py::arg("tau_im") = 1.0,
        py::arg("chain_length") = 1.0, py::arg("m") = 1.0,
        "Renormalized energy W of a simple periodic lattice (Ewald summation).");

    m.def(
        "lattice_scan",
        [](int nx, int ny, double im_max, int workers) {
            LatticeScanResult r = lattice_scan_2d(nx, ny, im_max, workers);
            py::dict out;
            out["argmin_tau"] = py::make_tuple(r.argmin.tau_re, r.argmin.tau_im);
            out["argmin_w"] = r.argmin.w;
            std::vector<std::tuple<double, double, double>> grid;
            for (const LatticeScanPoint& p : r.grid)
                grid.emplace_back(p.tau_re, p.tau_im, p.w);
            out["grid"] = grid;
            return out;
        },
        py::arg("nx") = 26, py::arg("ny") = 26, py::arg("im_max") = 2.0,
        py::arg("workers") = 1, "Scan W over unimodular lattices tau.");

    // --- partition function ---------------------------------------------------
    m.def("logz_closed_form", &logz_closed_form, py::arg("n"), py::arg("beta"), py::arg("d"),
          py::arg("a"));

    m.def(
        "logz_estimate_ti",
        [](double beta_anchor, double beta_target, int n, const std::string& kernel, double a,
           int nodes, long sweeps, std::uint64_t seed, int workers) {
            GibbsParams p = make_params(beta_anchor, n, kernel, a, 0.5);
            TiOptions o;
            o.nodes = nodes;
            o.sweeps = sweeps;
            o.seed = seed;
            o.workers = workers;
            TiResult r = logz_estimate_ti(p, beta_anchor, beta_target, o);
            py::dict out;
            out["value"] = r.value;
            out["error"] = r.error;
            out["betas"] = r.curve.betas;
            out["energies"] = r.curve.energies;
            return out;
        },
        py::arg("beta_anchor"), py::arg("beta_target"), py::arg("n"), py::arg("kernel"),
        py::arg("a"), py::arg("nodes") = 9, py::arg("sweeps") = 20000, py::arg("seed") = 1,
        py::arg("workers") = 1, "Thermodynamic integration from a closed-form anchor.");

    m.def(
        "expansion_fit",
        [](const std::vector<int>& ns, const std::vector<double>& logz, double beta, int d,
           const std::string& kernel, double a) {
            KernelSpec k = make_kernel(kernel, 0.5);
            EquilibriumMeasure eqm = EquilibriumMeasure::make(PotentialSpec{a}, k);
            FreeEnergyReport r = expansion_fit(ns, logz, {}, beta, d, eqm.iv(), k.is_log());
            py::dict out;
            out["coeff_leading"] = r.coeff_leading;
            out["coeff_nlogn"] = r.coeff_nlogn;
            out["coeff_n"] = r.coeff_n;
            out["predicted_leading"] = r.predicted_leading;
            out["predicted_nlogn"] = r.predicted_nlogn;
            out["residuals"] = r.residuals;
            return out;
        },
        py::arg("ns"), py::arg("logz"), py::arg("beta"), py::arg("d"), py::arg("kernel"),
        py::arg("a"));

    // --- experiment pipeline --------------------------------------------------
    m.def(
        "run_experiment",
        [](const std::string& subcommand, const std::string& config_text, std::uint64_t seed,
           int workers, const std::string& out_dir) {
            ConfigFile cfg = ConfigFile::parse_string(config_text);
            RunOptions opts;
            opts.seed = seed;
            opts.workers = workers;
            opts.out_dir = out_dir;
            RunResult res = run_experiment(subcommand, cfg, opts);
            py::dict out;
            out["ok"] = res.ok;
            out["files"] = res.files;
            out["manifest_json"] = res.manifest.dump();
            return out;
        },
        py::arg("subcommand"), py::arg("config_text"), py::arg("seed") = 1,
        py::arg("workers") = 1, py::arg("out_dir") = ".",
        "Run one CLI pipeline; returns files written and the manifest as JSON.");

    m.def(
        "run_acceptance",
        [](int workers, std::uint64_t seed) {
            std::ostringstream log;
            std::vector<CriterionResult> results = run_acceptance(log, workers, seed);
            std::vector<py::dict> rows;
            for (const CriterionResult& r : results) {
                py::dict row;
                row["index"] = r.index;
                row["name"] = r.name;
                row["pass"] = r.pass;
                row["seconds"] = r.seconds;
                row["detail"] = r.detail;
                rows.push_back(row);
            }
            py::dict out;
            out["criteria"] = rows;
            out["all_passed"] = all_passed(results);
            out["log"] = log.str();
            return out;
        },
        py::arg("workers") = 4, py::arg("seed") = 2026,
        "Run the full acceptance suite (slow).");
}
