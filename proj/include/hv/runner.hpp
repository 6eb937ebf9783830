#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hv/model.hpp"
#include "hv/parallel.hpp"

namespace hv {

inline constexpr const char* kToolVersion = "hetvoter 0.1.0";

/// Effective configuration of one run: model parameters plus one block per
/// subcommand. Every field maps 1:1 to a dotted key in the key=value config
/// file and to a CLI flag; precedence is CLI flag > file > default.
struct ExperimentConfig {
    ModelParams model;
    std::string out_dir = "out";
    int threads = 0;
    bool serial = false;  // run sweeps on the serial reference path

    struct Ode {
        double x0_m_plus = 0.05;
        double x0_m_minus = 0.05;
        double horizon = 50.0;
        double step = 0.01;
    } ode;

    struct Simulate {
        std::string mode = "absorption";  // absorption | exit
        double disk_m_plus = -1.0;        // negative: interior equilibrium
        double disk_m_minus = -1.0;
        double disk_radius = 0.1;
        std::int64_t replicas = 100;
        double cap = 1e7;
        bool shared_env = true;
        std::int64_t start_k_plus = -1;   // negative: z-nearest lattice state
        std::int64_t start_k_minus = -1;
        double max_censored_fraction = 1.0;
        bool record_path = false;         // additionally export replica 1's path
        double grid_dt = 0.0;             // >0: grid-thinned path export
        double horizon = 10.0;            // horizon of the exported path
    } simulate;

    struct Qpot {
        double target_m_plus = -1.0;      // both set: single-target mode
        double target_m_minus = -1.0;
        double radius = 0.1;              // else: boundary profile of this disk
        int n_points = 64;
        int segments = 200;
        int max_iterations = 20000;
        int restarts = 3;
        double tol = 1e-6;
        bool warm_start = true;
    } qpot;

    struct Fpt {
        std::string mode = "exit";        // exit | absorption
        double radius = 0.1;
        double disk_m_plus = -1.0;
        double disk_m_minus = -1.0;
        std::int64_t start_k_plus = -1;
        std::int64_t start_k_minus = -1;
        bool pinned_env = true;           // n_plus = round(N q) instead of sampled
    } fpt;

    struct Fluct {
        std::string h_source = "value";   // value | environment
        double h_value = 0.0;
        double horizon = 550.0;
        double step = 0.01;
        double burn_in = 50.0;
        bool empirical = false;           // also run the chain and export sqrt(N)-fluctuations
        double x0_x = 0.0;
        double x0_y = 0.0;
    } fluct;

    struct Scaling {
        std::vector<std::int64_t> n_list = {40, 60, 80, 100, 120, 140, 160, 180, 200};
        std::string mode = "exit";
        double radius = 0.1;
        bool pinned_env = true;
        bool with_boundary = true;
        int n_points = 64;
        int segments = 200;
        double tol = 1e-6;
    } scaling;

    ExecConfig exec() const {
        return ExecConfig{serial ? Exec::serial : Exec::openmp, threads};
    }
};

/// Applies `key = value` lines (# comments, blank lines allowed) onto cfg.
/// Unknown keys are an error.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
void apply_config_text(ExperimentConfig& cfg, const std::string& text);

/// Deterministic key=value serialization of the model block, common options
/// and the given subcommand's block; this is the config echo stored in run
/// manifests and sufficient to regenerate the run.
std::string serialize_config(const ExperimentConfig& cfg, const std::string& subcommand);

/// All recognized config keys, in serialization order (the CLI builds its
/// per-subcommand flags from these).
std::vector<std::string> config_key_names();
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct RunResult {
    int exit_code = 0;                 // 0 ok, 3 numerical (non-convergence)
    std::vector<std::string> files;    // data files written under out_dir
};

RunResult run_ode(const ExperimentConfig& cfg);
RunResult run_simulate(const ExperimentConfig& cfg);
RunResult run_qpot(const ExperimentConfig& cfg);
RunResult run_fpt(const ExperimentConfig& cfg);
RunResult run_fluct(const ExperimentConfig& cfg);
RunResult run_scaling(const ExperimentConfig& cfg);

/// Dispatch by subcommand name; throws std::invalid_argument for unknown names.
RunResult run_subcommand(const std::string& name, const ExperimentConfig& cfg);

}  // namespace hv
