// membrane_lab: reproducible experiment runner for the membrane-model
// laboratory. Subcommands map onto the experiment layer; outputs are CSV
// (plus a flat key=value report for certify). Identical (config, seed) give
// byte-identical outputs for any worker count.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "membrane/config.hpp"
#include "membrane/errors.hpp"
#include "membrane/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value config file");
    cmd->add_option("--out", args.out_path, "output CSV path (default: stdout)");
    cmd->add_option("--seed", args.seed, "master seed (overrides config)")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--workers", args.workers, "worker threads (does not change values)");
}

membrane::Config load_config(const CommonArgs& args) {
    membrane::Config cfg = args.config_path.empty()
                               ? membrane::Config::parse_string("")
                               : membrane::Config::parse_file(args.config_path);
    if (args.seed_set) cfg.set("seed", std::to_string(args.seed));
    if (args.workers > 0) cfg.set("workers", std::to_string(args.workers));
    return cfg;
}

void emit(const membrane::ExperimentOutput& out, const CommonArgs& args) {
    if (args.out_path.empty()) {
        std::cout << out.csv;
        if (!out.report.empty()) std::cout << out.report;
        return;
    }
    std::ofstream f(args.out_path, std::ios::binary);
    if (!f) throw membrane::ResourceError("cannot open output path " + args.out_path);
    f << out.csv;
    if (!out.report.empty()) {
        std::ofstream rep(args.out_path + ".report", std::ios::binary);
        rep << out.report;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"membrane model laboratory"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        membrane::ExperimentOutput (*run)(const membrane::Config&);
    };
    const Sub subs[] = {
        {"green", "Green-table build/validation (quadrature vs path-sum oracle)",
         membrane::run_green_validate},
        {"sample", "sampler covariance validation", membrane::run_sample_validate},
        {"sweep", "coupled crossing-probability sweep", membrane::run_sweep},
        {"decoupling", "decoupling-inequality Monte Carlo", membrane::run_decoupling},
        {"certify", "renormalization certificate", membrane::run_certify},
        {"decompose", "high-dimension covariance decomposition sweep", membrane::run_decompose},
        {"slab", "exploratory slab crossing frequencies", membrane::run_slab},
    };

    std::vector<CommonArgs> args(std::size(subs));
    std::vector<CLI::App*> cmds;
    for (size_t i = 0; i < std::size(subs); ++i) {
        CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
        add_common(cmd, args[i]);
        cmds.push_back(cmd);
    }

    CLI11_PARSE(app, argc, argv);

    for (size_t i = 0; i < std::size(subs); ++i) {
        if (!cmds[i]->parsed()) continue;
        try {
            const membrane::Config cfg = load_config(args[i]);
            emit(subs[i].run(cfg), args[i]);
            return 0;
        } catch (const membrane::PreconditionError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        } catch (const membrane::ResourceError& e) {
            std::cerr << "resource cap: " << e.what() << "\n";
            return 4;
        } catch (const membrane::NumericError& e) {
            std::cerr << "numeric failure: " << e.what() << "\n";
            return 3;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
    }
    return 2;
}
