#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hv/errors.hpp"
#include "hv/runner.hpp"

namespace {

const char* kSubcommands[] = {"ode", "simulate", "qpot", "fpt", "fluct", "scaling"};

const char* describe(const std::string& name) {
    if (name == "ode") return "integrate the mean-field ODE and report equilibria";
    if (name == "simulate") return "stochastic replicas of the exact finite-N chain";
    if (name == "qpot") return "quasi-potential by minimum-action path optimization";
    if (name == "fpt") return "exact mean first-passage time (sparse linear solve)";
    if (name == "fluct") return "fluctuation SDE, stationary moments, empirical series";
    if (name == "scaling") return "exit-time scaling fit vs the boundary quasi-potential";
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    hv::ExperimentConfig cfg;

    // pass 1: config file, so explicit flags override it afterwards
    std::string config_path;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    }
    if (!config_path.empty()) {
        try {
            hv::apply_config_file(cfg, config_path);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        }
    }

    CLI::App app{"hetvoter: heterogeneous voter model toolkit"};
    app.require_subcommand(1);
    std::string dummy;

    std::vector<std::string> keys = hv::config_key_names();
    for (const char* name : kSubcommands) {
        CLI::App* sub = app.add_subcommand(name, describe(name));
        sub->add_option("--config", dummy, "key = value config file");
        sub->add_option_function<std::string>(
            "--seed", [&cfg](const std::string& v) { hv::set_config_value(cfg, "model.seed", v); },
            "root RNG seed");
        sub->add_option_function<std::string>(
            "--out", [&cfg](const std::string& v) { hv::set_config_value(cfg, "out", v); },
            "output directory");
        sub->add_option_function<std::string>(
            "--threads", [&cfg](const std::string& v) { hv::set_config_value(cfg, "threads", v); },
            "worker pool size (0: default)");
        sub->add_flag_function(
            "--serial",
            [&cfg](std::int64_t count) {
                if (count > 0) hv::set_config_value(cfg, "serial", "true");
            },
            "use the serial reference path for sweeps");
        for (const char* mk : {"model.n", "model.rho", "model.q"}) {
            const std::string key = mk;
            const std::string flag = "--" + key.substr(6);
            sub->add_option_function<std::string>(
                flag, [&cfg, key](const std::string& v) { hv::set_config_value(cfg, key, v); });
        }
        const std::string prefix = std::string(name) + ".";
        for (const std::string& key : keys) {
            if (key.rfind(prefix, 0) != 0) continue;
            const std::string flag = "--" + key.substr(prefix.size());
            sub->add_option_function<std::string>(
                flag, [&cfg, key](const std::string& v) { hv::set_config_value(cfg, key, v); });
        }
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        const hv::RunResult result = hv::run_subcommand(name, cfg);
        if (result.exit_code != 0)
            std::fprintf(stderr, "warning: run finished with numerical issues (exit %d)\n",
                         result.exit_code);
        return result.exit_code;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const hv::numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
