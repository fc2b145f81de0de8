#include "coulgas/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "coulgas/acceptance.hpp"
#include "coulgas/energy.hpp"
#include "coulgas/equilibrium.hpp"
#include "coulgas/error.hpp"
#include "coulgas/fluct.hpp"
#include "coulgas/jellium.hpp"
#include "coulgas/sampler.hpp"
#include "coulgas/stats.hpp"
#include "coulgas/thermo.hpp"

namespace coulgas {

namespace {

using nlohmann::json;

constexpr const char* kArtifactVersion = "1.0.0";

std::string hash_hex(std::uint64_t h) {
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

KernelSpec kernel_from_config(const ConfigFile& cfg) {
    std::string name = cfg.get("gibbs", "kernel", "log2");
    KernelCase kc = kernel_case_from_string(name);
    switch (kc) {
        case KernelCase::Log1: return KernelSpec::log1();
        case KernelCase::Log2: return KernelSpec::log2();
        case KernelCase::Coul: return KernelSpec::coul(3);
        case KernelCase::Riesz: {
            double s = cfg.get_double("gibbs", "riesz_s", 0.5);
            return KernelSpec::riesz(1, s);
        }
    }
    throw ConfigError("config: gibbs.kernel unrecognized: " + name);
}

GibbsParams gibbs_from_config(const ConfigFile& cfg) {
    GibbsParams p;
    p.beta = cfg.get_double("gibbs", "beta", 2.0);
    p.n = static_cast<int>(cfg.get_long("gibbs", "n", 16));
    p.kernel = kernel_from_config(cfg);
    p.pot = PotentialSpec{cfg.get_double("gibbs", "potential_a",
                                         p.kernel.kase == KernelCase::Log1 ? 0.5 : 1.0)};
    p.validate();
    return p;
}

McmcOptions mcmc_from_config(const ConfigFile& cfg, std::uint64_t seed) {
    McmcOptions o;
    o.sweeps = cfg.get_long("sampler", "sweeps", 5000);
    o.burn_fraction = cfg.get_double("sampler", "burn_fraction", 0.2);
    o.thinning = static_cast<int>(cfg.get_long("sampler", "thinning", 1));
    o.seed = seed;
    if (o.sweeps < 1 || o.thinning < 1 || o.burn_fraction < 0.0 || o.burn_fraction >= 1.0)
        throw ConfigError("config: sampler options out of range");
    return o;
}

struct CsvWriter {
    std::ofstream out;
    explicit CsvWriter(const std::string& path, const std::string& header) : out(path) {
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        out.precision(12);
        out << header << "\n";
    }
};

std::string table_path(const RunOptions& opts, const ConfigFile& cfg, const std::string& stem,
                       const std::string& ext) {
    std::filesystem::create_directories(opts.out_dir);
    std::ostringstream name;
    name << stem << "_" << opts.seed << "_" << hash_hex(cfg.hash()) << "." << ext;
    return (std::filesystem::path(opts.out_dir) / name.str()).string();
}

json rng_audit(std::uint64_t seed, std::vector<std::uint64_t> streams) {
    json j;
    j["seed"] = seed;
    j["streams"] = streams;
    return j;
}

// --- subcommand pipelines ---------------------------------------------------

void do_sample(const ConfigFile& cfg, const RunOptions& opts, RunResult& res) {
    GibbsParams p = gibbs_from_config(cfg);
    McmcOptions o = mcmc_from_config(cfg, opts.seed);
    int chains = static_cast<int>(cfg.get_long("sampler", "chains", 1));
    if (chains < 1) throw ConfigError("config: sampler.chains must be >= 1");

    struct ChainOut {
        ChainState final_state;
        std::vector<Configuration> samples;
    };
    std::vector<ChainOut> outs(static_cast<size_t>(chains));
    std::vector<std::uint64_t> streams;
    for (int c = 0; c < chains; ++c) streams.push_back(static_cast<std::uint64_t>(c));

    auto run_chain = [&](int c) {
        McmcOptions oc = o;
        oc.stream_id = static_cast<std::uint64_t>(c);
        if (c == 0 && !opts.resume_path.empty()) {
            Checkpoint cp = load_checkpoint(opts.resume_path);
            outs[0].final_state = cp.state;
            mcmc_continue(cp.params, outs[0].final_state, o.sweeps, 0, o.thinning,
                          outs[0].samples);
        } else {
            outs[static_cast<size_t>(c)].samples =
                mcmc_run(p, oc, &outs[static_cast<size_t>(c)].final_state);
        }
    };
    if (opts.workers > 1 && chains > 1) {
        std::vector<std::thread> pool;
        for (int c = 0; c < chains; ++c) pool.emplace_back(run_chain, c);
        for (auto& t : pool) t.join();
    } else {
        for (int c = 0; c < chains; ++c) run_chain(c);
    }

    std::string csv = table_path(opts, cfg, "sample", "csv");
    CsvWriter w(csv, "chain,sweeps,kept,acceptance_rate,mean_radius2,se_mean_radius2");
    json chain_info = json::array();
    for (int c = 0; c < chains; ++c) {
        const ChainOut& co = outs[static_cast<size_t>(c)];
        std::vector<double> r2;
        for (const Configuration& s : co.samples) {
            double acc = 0.0;
            for (const Vec& x : s.points) acc += norm2(x, s.d);
            r2.push_back(acc / s.n());
        }
        BatchMeans bm = batch_means(r2);
        w.out << c << "," << o.sweeps << "," << co.samples.size() << ","
              << co.final_state.acceptance_rate() << "," << bm.mean << "," << bm.se << "\n";
        json ci;
        ci["chain"] = c;
        ci["acceptance_rate"] = co.final_state.acceptance_rate();
        ci["kept"] = co.samples.size();
        ci["mean_radius2"] = bm.mean;
        ci["se"] = bm.se;
        chain_info.push_back(ci);
    }
    std::string ckpt = table_path(opts, cfg, "checkpoint", "txt");
    save_checkpoint(ckpt, p, outs[0].final_state);
    res.files = {csv, ckpt};
    res.manifest["outputs"]["chains"] = chain_info;
    res.manifest["outputs"]["provenance"] = "mcmc";
    res.manifest["rng"] = rng_audit(opts.seed, streams);
}

void do_oracle(const ConfigFile& cfg, const RunOptions& opts, RunResult& res) {
    std::string ensemble = cfg.get("oracle", "ensemble", "ginibre");
    int draws = static_cast<int>(cfg.get_long("oracle", "draws", 16));
    GibbsParams p = gibbs_from_config(cfg);
    if (draws < 1) throw ConfigError("config: oracle.draws must be >= 1");
    std::vector<double> pooled;
    std::vector<std::uint64_t> streams;
    for (int r = 0; r < draws; ++r) {
        streams.push_back(static_cast<std::uint64_t>(r));
        Configuration c;
        if (ensemble == "ginibre") {
            c = sample_ginibre(p.n, opts.seed, static_cast<std::uint64_t>(r));
            for (const Vec& x : c.points) pooled.push_back(norm(x, 2));
        } else if (ensemble == "tridiag") {
            c = sample_beta_tridiag(p.n, p.beta, opts.seed, static_cast<std::uint64_t>(r));
            for (const Vec& x : c.points) pooled.push_back(x[0]);
        } else {
            throw ConfigError("config: oracle.ensemble must be ginibre or tridiag");
        }
    }
    KsResult ks;
    if (ensemble == "ginibre") {
        ks = ks_test(pooled, [](double r) {
            if (r <= 0.0) return 0.0;
            if (r >= 1.0) return 1.0;
            return r * r;
        });
    } else {
        constexpr double kPi = std::numbers::pi;
        ks = ks_test(pooled, [](double x) {
            if (x <= -2.0) return 0.0;
            if (x >= 2.0) return 1.0;
            return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
                   std::asin(0.5 * x) / std::numbers::pi;
        });
        (void)kPi;
    }
    std::string csv = table_path(opts, cfg, "oracle", "csv");
    CsvWriter w(csv, "ensemble,n,draws,ks_statistic,ks_p_value");
    w.out << ensemble << "," << p.n << "," << draws << "," << ks.statistic << "," << ks.p_value
          << "\n";
    res.files = {csv};
    res.manifest["outputs"]["ks_statistic"] = ks.statistic;
    res.manifest["outputs"]["ks_p_value"] = ks.p_value;
    res.manifest["outputs"]["provenance"] = "closed-form ensemble sampler";
    res.manifest["rng"] = rng_audit(opts.seed, streams);
}

void do_energy_audit(const ConfigFile& cfg, const RunOptions& opts, RunResult& res) {
    GibbsParams p = gibbs_from_config(cfg);
    EquilibriumMeasure eqm = EquilibriumMeasure::make(p.pot, p.kernel);
    Configuration c;
    c.d = p.kernel.d;
    std::string pts = cfg.get("energy", "points_file", "");
    if (!pts.empty()) {
        std::ifstream in(pts);
        if (!in) throw ConfigError("config: energy.points_file cannot be opened: " + pts);
        double a = 0.0, b = 0.0, cc = 0.0;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            if (!(ls >> a)) throw ConfigError("config: energy.points_file has a malformed line");
            if (c.d >= 2 && !(ls >> b))
                throw ConfigError("config: energy.points_file has a malformed line");
            if (c.d >= 3 && !(ls >> cc))
                throw ConfigError("config: energy.points_file has a malformed line");
            c.points.push_back(Vec{a, b, cc});
        }
        if (c.points.empty()) throw ConfigError("config: energy.points_file is empty");
    } else {
        std::mt19937_64 rng = make_stream(opts.seed, 0);
        for (int i = 0; i < p.n; ++i) c.points.push_back(eqm.sample(rng));
    }
    int n = c.n();
    double h = hamiltonian(c, p.pot, p.kernel);
    double lead = static_cast<double>(n) * n * eqm.iv();
    KahanSum zeta;
    for (const Vec& x : c.points) zeta.add(eqm.zeta(x));
    double zterm = 2.0 * n * zeta.value();
    double fn = next_order_energy(c, eqm, p.kernel);
    double tol = cfg.get_double("energy", "tolerance", 1e-8);
    double resid = std::abs(h - (lead + zterm + fn)) / std::max(1.0, std::abs(h));
    std::string csv = table_path(opts, cfg, "energy_audit", "csv");
    CsvWriter w(csv,
                "n,hamiltonian,leading_n2_iv,zeta_term,next_order_fn,relative_residual,tolerance");
    w.out << n << "," << h << "," << lead << "," << zterm << "," << fn << "," << resid << ","
          << tol << "\n";
    res.files = {csv};
    res.manifest["outputs"]["relative_residual"] = resid;
    res.manifest["outputs"]["tolerance"] = tol;
    res.manifest["outputs"]["provenance"] = "splitting identity audit";
    res.manifest["rng"] = rng_audit(opts.seed, {0});
    if (resid > tol)
        throw NumericError("energy-audit: splitting residual above tolerance", resid);
}

void do_fluct(const ConfigFile& cfg, const RunOptions& opts, RunResult& res) {
    GibbsParams p = gibbs_from_config(cfg);
    EquilibriumMeasure eqm = EquilibriumMeasure::make(p.pot, p.kernel);
    McmcOptions o = mcmc_from_config(cfg, opts.seed);
    double cx = cfg.get_double("fluct", "xi_center_x", 0.0);
    double cy = cfg.get_double("fluct", "xi_center_y", 0.0);
    double ri = cfg.get_double("fluct", "xi_inner", 0.2);
    double ro = cfg.get_double("fluct", "xi_outer", 0.5);
    TestFunction xi = (p.kernel.d == 1)
                          ? TestFunction::radial_bump(vec1(cx), ri, ro, 1)
                          : TestFunction::radial_bump(vec2(cx, cy), ri, ro, p.kernel.d);
    double xm = xi_mean(eqm, xi);
    std::vector<Configuration> samples = mcmc_run(p, o);
    std::vector<double> fl;
    fl.reserve(samples.size());
    for (const Configuration& s : samples) fl.push_back(fluct_linear(s, xi, xm));
    std::optional<VariancePrediction> pred;
    if (p.kernel.kase == KernelCase::Log2 && xi.supported_inside(eqm))
        pred = variance_prediction(xi, p.beta, eqm);
    CltReport rep = clt_report(fl, p.beta, p.n, pred);
    std::string csv = table_path(opts, cfg, "fluct", "csv");
    CsvWriter w(csv, "beta,n,mean,se_mean,var,se_var,var_pred,var_pred_alt,p_normal,ess");
    w.out << rep.beta << "," << rep.n << "," << rep.sample_mean << "," << rep.se_mean << ","
          << rep.sample_variance << "," << rep.se_variance << "," << rep.predicted_variance << ","
          << rep.predicted_variance_alt << "," << rep.p_normal << "," << rep.ess << "\n";
    res.files = {csv};
    res.manifest["outputs"]["sample_variance"] = rep.sample_variance;
    res.manifest["outputs"]["predicted_variance"] = rep.predicted_variance;
    res.manifest["outputs"]["p_normal"] = rep.p_normal;
    res.manifest["outputs"]["provenance"] = "mcmc linear statistics";
    res.manifest["rng"] = rng_audit(opts.seed, {0});
}

void do_jellium(const ConfigFile& cfg, const RunOptions& opts, RunResult& res) {
    std::vector<double> etas = cfg.get_list("jellium", "eta_sequence", {0.2, 0.1, 0.05, 0.025});
    std::string csv = table_path(opts, cfg, "jellium", "csv");
    CsvWriter w(csv, "lattice,param1,param2,w,error_estimate");
    json rows = json::array();
    auto emit = [&](const std::string& name, double p1, double p2, const PeriodicConfig& pc,
                    const KernelSpec& k) {
        RenormEnergyResult r = renorm_energy_periodic(pc, k, etas);
        w.out << name << "," << p1 << "," << p2 << "," << r.value << "," << r.error_estimate
              << "\n";
        json row;
        row["lattice"] = name;
        row["w"] = r.value;
        row["error"] = r.error_estimate;
        rows.push_back(row);
    };
    std::string lattice = cfg.get("jellium", "lattice", "all");
    double delta = cfg.get_double("jellium", "dimer_delta", 0.1);
    if (lattice == "square" || lattice == "all")
        emit("square", 0.0, 1.0, PeriodicConfig{LatticeSpec::square(), {vec2(0, 0)}, 1.0},
             KernelSpec::log2());
    if (lattice == "triangular" || lattice == "all")
        emit("triangular", 0.5, 0.5 * std::sqrt(3.0),
             PeriodicConfig{LatticeSpec::triangular(), {vec2(0, 0)}, 1.0}, KernelSpec::log2());
    if (lattice == "tau") {
        double tre = cfg.get_double("jellium", "tau_re", 0.0);
        double tim = cfg.get_double("jellium", "tau_im", 1.0);
        emit("tau", tre, tim,
             PeriodicConfig{LatticeSpec::from_tau(tre, tim), {vec2(0, 0)}, 1.0},
             KernelSpec::log2());
    }
    if (lattice == "chain" || lattice == "all") {
        double len = cfg.get_double("jellium", "chain_length", 1.0);
        emit("chain", len, 0.0,
             PeriodicConfig{LatticeSpec::chain(len), {vec1(0.0)}, 1.0 / len},
             KernelSpec::log1());
        emit("dimerized", 2.0, delta,
             PeriodicConfig{LatticeSpec::chain(2.0), {vec1(0.0), vec1(1.0 + delta)}, 1.0},
             KernelSpec::log1());
    }
    res.files = {csv};
    if (cfg.has("jellium", "scan_nx")) {
        int nx = static_cast<int>(cfg.get_long("jellium", "scan_nx", 26));
        int ny = static_cast<int>(cfg.get_long("jellium", "scan_ny", 26));
        double im_max = cfg.get_double("jellium", "scan_im_max", 2.0);
        LatticeScanResult scan = lattice_scan_2d(nx, ny, im_max, opts.workers);
        std::string grid_csv = table_path(opts, cfg, "jellium_scan", "csv");
        CsvWriter g(grid_csv, "tau_re,tau_im,w,ewald_tolerance");
        for (const LatticeScanPoint& pt : scan.grid)
            g.out << pt.tau_re << "," << pt.tau_im << "," << pt.w << "," << 1e-10 << "\n";
        res.files.push_back(grid_csv);
        res.manifest["outputs"]["scan_argmin"] = {{"tau_re", scan.argmin.tau_re},
                                                  {"tau_im", scan.argmin.tau_im},
                                                  {"w", scan.argmin.w}};
    }
    res.manifest["outputs"]["lattices"] = rows;
    res.manifest["outputs"]["provenance"] = "ewald lattice sums";
    res.manifest["rng"] = rng_audit(opts.seed, {});
}

void do_logz(const ConfigFile& cfg, const RunOptions& opts, RunResult& res) {
    GibbsParams p = gibbs_from_config(cfg);
    int d = p.kernel.d;
    std::vector<long> ns = cfg.get_long_list("logz", "ns", {8, 16, 32, 64});
    std::string csv = table_path(opts, cfg, "logz", "csv");
    CsvWriter w(csv, "n,beta,logz,se,source");
    std::vector<int> ns_i;
    std::vector<double> lz, se;
    for (long n : ns) {
        double v = logz_closed_form(static_cast<int>(n), p.beta, d, p.pot.a);
        w.out << n << "," << p.beta << "," << v << "," << 0.0 << ",closed-form\n";
        ns_i.push_back(static_cast<int>(n));
        lz.push_back(v);
        se.push_back(0.0);
    }
    res.files = {csv};
    json out;
    if (cfg.get_bool("logz", "fit", true) && ns_i.size() >= 4) {
        EquilibriumMeasure eqm = EquilibriumMeasure::make(p.pot, p.kernel);
        FreeEnergyReport rep = expansion_fit(ns_i, lz, se, p.beta, d, eqm.iv(), p.kernel.is_log());
        out["fit"] = {{"coeff_leading", rep.coeff_leading},
                      {"coeff_nlogn", rep.coeff_nlogn},
                      {"coeff_n", rep.coeff_n},
                      {"predicted_leading", rep.predicted_leading},
                      {"predicted_nlogn", rep.predicted_nlogn},
                      {"residuals", rep.residuals}};
    }
    double banchor = cfg.get_double("logz", "beta_anchor", p.beta);
    double btarget = cfg.get_double("logz", "beta_target", banchor);
    if (btarget != banchor) {
        TiOptions to;
        to.nodes = static_cast<int>(cfg.get_long("logz", "nodes", 9));
        to.sweeps = cfg.get_long("logz", "ti_sweeps", 20000);
        to.seed = opts.seed;
        to.workers = opts.workers;
        GibbsParams pt = p;
        pt.beta = banchor;
        TiResult ti = logz_estimate_ti(pt, banchor, btarget, to);
        w.out << p.n << "," << btarget << "," << ti.value << "," << ti.error << ",ti\n";
        out["ti"] = {{"value", ti.value}, {"error", ti.error}, {"anchor_beta", banchor}};
    }
    out["anchors"] = lz;
    res.manifest["outputs"] = out;
    res.manifest["outputs"]["provenance"] = "closed forms + thermodynamic integration";
    res.manifest["rng"] = rng_audit(opts.seed, {});
}

void do_verify(const ConfigFile& cfg, const RunOptions& opts, RunResult& res, std::ostream& log) {
    (void)cfg;
    std::vector<CriterionResult> results = run_acceptance(log, opts.workers, opts.seed);
    json rows = json::array();
    for (const CriterionResult& r : results) {
        json row;
        row["index"] = r.index;
        row["name"] = r.name;
        row["pass"] = r.pass;
        row["seconds"] = r.seconds;
        row["detail"] = r.detail;
        rows.push_back(row);
    }
    res.manifest["outputs"]["criteria"] = rows;
    res.manifest["outputs"]["provenance"] = "acceptance suite";
    res.ok = all_passed(results);
}

}  // namespace

RunResult run_experiment(const std::string& subcommand, const ConfigFile& cfg,
                         const RunOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    RunResult res;
    res.manifest["artifact_version"] = kArtifactVersion;
    res.manifest["subcommand"] = subcommand;
    res.manifest["config"] = cfg.sections();
    res.manifest["config_hash"] = hash_hex(cfg.hash());
    res.manifest["seed"] = opts.seed;
    res.manifest["workers"] = opts.workers;

    if (subcommand == "sample") do_sample(cfg, opts, res);
    else if (subcommand == "oracle") do_oracle(cfg, opts, res);
    else if (subcommand == "energy-audit") do_energy_audit(cfg, opts, res);
    else if (subcommand == "fluct") do_fluct(cfg, opts, res);
    else if (subcommand == "jellium") do_jellium(cfg, opts, res);
    else if (subcommand == "logz") do_logz(cfg, opts, res);
    else if (subcommand == "verify") do_verify(cfg, opts, res, std::cout);
    else throw ConfigError("unknown subcommand: " + subcommand);

    auto t1 = std::chrono::steady_clock::now();
    res.manifest["wall_clock_seconds"] = std::chrono::duration<double>(t1 - t0).count();
    res.manifest["timestamp"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    res.manifest["files"] = res.files;

    std::filesystem::create_directories(opts.out_dir);
    std::ostringstream name;
    name << subcommand << "_" << opts.seed << "_" << hash_hex(cfg.hash()) << ".json";
    std::string mpath = (std::filesystem::path(opts.out_dir) / name.str()).string();
    std::ofstream mf(mpath);
    mf << res.manifest.dump(2) << "\n";
    res.files.push_back(mpath);
    return res;
}

}  // namespace coulgas
