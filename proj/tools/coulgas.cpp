#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "coulgas/error.hpp"
#include "coulgas/experiment.hpp"

namespace {

// exit codes: 0 success, 2 validation error, 3 numeric tolerance failure,
// 4 acceptance-suite failure
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitAcceptance = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coulgas: numerical laboratory for log and Coulomb gases"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = ".";
    std::string resume_path;

    app.add_option("--config", config_path, "path to the run configuration file");
    app.add_option("--seed", seed, "base RNG seed (default 1)");
    app.add_option("--workers", workers, "number of worker threads (default 1)");
    app.add_option("--out", out_dir, "output directory for tables and manifests (default .)");
    app.add_option("--resume", resume_path, "checkpoint file to continue a sample run from");

    for (const char* name : {"sample", "oracle", "energy-audit", "fluct", "jellium", "logz",
                             "verify"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);
    std::string sub = app.get_subcommands().front()->get_name();

    try {
        coulgas::ConfigFile cfg = config_path.empty()
                                      ? coulgas::ConfigFile::parse_string("")
                                      : coulgas::ConfigFile::parse_file(config_path);
        coulgas::RunOptions opts;
        opts.seed = seed;
        opts.workers = workers;
        opts.out_dir = out_dir;
        opts.resume_path = resume_path;
        coulgas::RunResult res = coulgas::run_experiment(sub, cfg, opts);
        for (const std::string& f : res.files) std::cout << "wrote " << f << "\n";
        if (!res.ok) {
            std::cerr << "acceptance suite failed\n";
            return kExitAcceptance;
        }
        return kExitOk;
    } catch (const coulgas::NumericError& e) {
        std::cerr << "numeric tolerance failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const coulgas::ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
