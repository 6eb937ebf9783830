// Times the OpenMP sweeps against the serial reference and checks they agree.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "hv/fpt.hpp"
#include "hv/minaction.hpp"
#include "hv/simulate.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Timed {
    double serial_s = 0.0;
    double openmp_s = 0.0;
    bool identical = false;
};

void report(const char* name, const Timed& t) {
    std::printf("%-28s serial %8.3fs   openmp %8.3fs   speedup %5.2fx   identical %s\n",
                name, t.serial_s, t.openmp_s,
                t.openmp_s > 0 ? t.serial_s / t.openmp_s : 0.0,
                t.identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    const std::int64_t replicas = argc > 1 ? std::atoll(argv[1]) : 2000;

    hv::ModelParams params;
    params.n = 200;
    params.rho = 0.5;
    params.q = 0.5;
    params.seed = 99;

    {
        hv::BatchOptions opts;
        opts.replica_count = replicas;
        opts.cap = 1e7;
        opts.exec.policy = hv::Exec::serial;
        auto t0 = Clock::now();
        const hv::BatchSummary serial = hv::batch(params, opts);
        Timed t;
        t.serial_s = seconds_since(t0);
        opts.exec.policy = hv::Exec::openmp;
        t0 = Clock::now();
        const hv::BatchSummary omp = hv::batch(params, opts);
        t.openmp_s = seconds_since(t0);
        t.identical = serial.mean == omp.mean && serial.variance == omp.variance;
        report("absorption batch", t);
    }

    {
        std::vector<std::int64_t> n_list{40, 80, 120, 160, 200, 240};
        std::vector<double> serial_times(n_list.size()), omp_times(n_list.size());
        auto solve_all = [&](hv::Exec policy, std::vector<double>& out) {
            hv::parallel_for(
                static_cast<std::int64_t>(n_list.size()), hv::ExecConfig{policy, 0},
                [&](std::int64_t i) {
                    hv::ModelParams p = params;
                    p.n = n_list[static_cast<std::size_t>(i)];
                    hv::FptProblem prob;
                    prob.params = p;
                    prob.env = hv::pinned_environment(p);
                    prob.rule.kind = hv::StopRule::exit_disk;
                    prob.rule.center_m_plus = 1.0 / 3.0;
                    prob.rule.center_m_minus = 1.0 / 6.0;
                    prob.rule.radius = 0.1;
                    prob.start = hv::nearest_state(1.0 / 3.0, 1.0 / 6.0, prob.env);
                    out[static_cast<std::size_t>(i)] = hv::mean_exit_time_exact(prob);
                });
        };
        Timed t;
        auto t0 = Clock::now();
        solve_all(hv::Exec::serial, serial_times);
        t.serial_s = seconds_since(t0);
        t0 = Clock::now();
        solve_all(hv::Exec::openmp, omp_times);
        t.openmp_s = seconds_since(t0);
        t.identical = serial_times == omp_times;
        report("exit-time N sweep", t);
    }

    {
        hv::QuasiPotentialOptions opts;
        opts.segments = 100;
        hv::BoundaryMinOptions bopts;
        bopts.n_points = 16;
        bopts.warm_start = false;  // independent points is the parallel mode
        bopts.exec.policy = hv::Exec::serial;
        Timed t;
        auto t0 = Clock::now();
        const auto serial = hv::boundary_min({1.0 / 3.0, 1.0 / 6.0}, 0.1, params, opts, bopts);
        t.serial_s = seconds_since(t0);
        bopts.exec.policy = hv::Exec::openmp;
        t0 = Clock::now();
        const auto omp = hv::boundary_min({1.0 / 3.0, 1.0 / 6.0}, 0.1, params, opts, bopts);
        t.openmp_s = seconds_since(t0);
        t.identical = serial.values == omp.values;
        report("boundary profile", t);
    }

    return 0;
}
