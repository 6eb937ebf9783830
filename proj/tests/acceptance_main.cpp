// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Criterion 3 is measured exactly as specified; the window
// N <= 200 is pre-asymptotic (see the supplementary diagnostic printed with
// it, which runs the identical check on N = 400..1600).
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hv/fluctuations.hpp"
#include "hv/fpt.hpp"
#include "hv/io.hpp"
#include "hv/mean_field.hpp"
#include "hv/minaction.hpp"
#include "hv/runner.hpp"
#include "hv/simulate.hpp"
#include "support/oracles.hpp"
#include "support/stats.hpp"

using namespace hv;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("[%d] %-46s %s (%s)\n", idx, name, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// ---- criterion 1: rho = 1 linear law ----------------------------------

void criterion_1() {
    std::vector<double> ratios;
    for (std::int64_t n : {128, 256, 512}) {
        ModelParams params;
        params.n = n;
        params.rho = 1.0;
        const Environment env{n / 2, n};
        const double mean = mean_absorption_time_exact(params, env, {n / 4, n / 4});
        ratios.push_back(mean / (static_cast<double>(n) * std::log(2.0)));
    }
    const bool close = std::abs(ratios[2] - 1.0) <= 0.05;
    const bool monotone = std::abs(ratios[0] - 1.0) >= std::abs(ratios[1] - 1.0) &&
                          std::abs(ratios[1] - 1.0) >= std::abs(ratios[2] - 1.0);
    report(1, "rho=1 linear law <T_N> ~ N ln 2", close && monotone,
           "ratios " + fmt("%.5f", ratios[0]) + ", " + fmt("%.5f", ratios[1]) + ", " +
               fmt("%.5f", ratios[2]) + (monotone ? ", monotone" : ", NOT monotone"));
}

// ---- criterion 2: law of large numbers --------------------------------

void criterion_2() {
    ModelParams params;
    params.n = 10000;
    params.rho = 0.5;
    params.q = 0.5;
    const Environment env{5000, 10000};
    const Trajectory ode = integrate_ode({0.1, 0.1}, params, 10.0, 0.01);
    int ok = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const SampledPath path =
            simulate(params, env, {1000, 1000}, 10.0,
                     Rng::substream_seed(20240, static_cast<std::uint64_t>(rep)),
                     RecordMode{RecordMode::grid, 0.01});
        double sup = 0.0;
        for (std::size_t i = 0; i < path.times.size(); ++i) {
            const auto [mp, mm] = order_parameters(path.states[i], params);
            const std::size_t j =
                std::min(static_cast<std::size_t>(std::llround(path.times[i] / 0.01)),
                         ode.points.size() - 1);
            sup = std::max(sup,
                           std::hypot(mp - ode.points[j].m_plus, mm - ode.points[j].m_minus));
        }
        if (sup <= 0.05) ++ok;
    }
    report(2, "law of large numbers (Theorem 1)", ok >= 95,
           std::to_string(ok) + "/100 replicas within 0.05 of the ODE");
}

// ---- criterion 3: exponential exit-time scaling ------------------------

double exit_time_at(std::int64_t n, double radius) {
    FptProblem p;
    p.params.n = n;
    p.params.rho = 0.5;
    p.params.q = 0.5;
    p.env = pinned_environment(p.params);
    const Point2 z = interior_equilibrium(p.params);
    p.rule.kind = StopRule::exit_disk;
    p.rule.center_m_plus = z.m_plus;
    p.rule.center_m_minus = z.m_minus;
    p.rule.radius = radius;
    p.start = nearest_state(z.m_plus, z.m_minus, p.env);
    return mean_exit_time_exact(p);
}

ScalingFit fit_over(const std::vector<std::int64_t>& n_list, double radius) {
    std::vector<double> times;
    for (std::int64_t n : n_list) times.push_back(exit_time_at(n, radius));
    return scaling_fit(n_list, times);
}

void criterion_3() {
    ModelParams params;
    params.rho = 0.5;
    params.q = 0.5;
    const Point2 z = interior_equilibrium(params);

    QuasiPotentialOptions opts;
    opts.segments = 200;
    opts.tol = 2e-7;
    opts.max_iterations = 15000;
    BoundaryMinOptions bopts;
    bopts.n_points = 64;
    const BoundaryProfile profile = boundary_min(z, 0.1, params, opts, bopts);
    const double v_dd = profile.min_value;

    const ScalingFit spec_fit = fit_over({40, 60, 80, 100, 120, 140, 160, 180, 200}, 0.1);
    const double gap = (spec_fit.slope - v_dd) / v_dd;
    const bool pass = spec_fit.r_squared >= 0.99 && std::abs(gap) <= 0.15;
    report(3, "exponential exit-time scaling (Theorem 2)", pass,
           "N=40..200: R2 " + fmt("%.4f", spec_fit.r_squared) + ", slope " +
               fmt("%.5f", spec_fit.slope) + " vs V_dD " + fmt("%.5f", v_dd) + ", gap " +
               fmt("%+.1f", 100.0 * gap) + "%");

    const ScalingFit asym_fit = fit_over({400, 800, 1200, 1600}, 0.1);
    const double asym_gap = (asym_fit.slope - v_dd) / v_dd;
    const bool asym_pass = asym_fit.r_squared >= 0.99 && std::abs(asym_gap) <= 0.15;
    std::printf("    supplementary diagnostic, asymptotic window N=400..1600 (not a spec "
                "criterion): %s (R2 %.5f, slope %.5f vs V_dD %.5f, gap %+.1f%%)\n",
                asym_pass ? "PASS" : "FAIL", asym_fit.r_squared, asym_fit.slope, v_dd,
                100.0 * asym_gap);
    std::fflush(stdout);
}

// ---- criterion 4: Lagrangian correctness -------------------------------

void criterion_4() {
    ModelParams params;
    params.q = 0.5;
    params.rho = 0.5;
    bool dual_ok = true, zero_ok = true;
    double worst_dual = 0.0, worst_zero = 0.0;
    for (int ix = 0; ix < 20; ++ix) {
        const double xv = 0.03 + 0.44 * ix / 19.0;
        const double yv = 0.46 - 0.42 * ix / 19.0;
        const Point2 x{xv, yv};
        const LdRates r = ld_rates(x, params);
        for (int ib = 0; ib < 20; ++ib) {
            const Vec2 beta{-0.3 + 0.6 * ib / 19.0, 0.25 - 0.5 * ib / 19.0};
            const double direct = lagrangian(x, beta, params);
            const double sup = oracle::legendre_sup_1d(r.l1, r.r1, beta[0]) +
                               oracle::legendre_sup_1d(r.l2, r.r2, beta[1]);
            worst_dual = std::max(worst_dual, std::abs(direct - sup));
            if (std::abs(direct - sup) > 1e-6) dual_ok = false;
            for (double a1 = -2.0; a1 <= 2.0; a1 += 1.0) {
                for (double a2 = -2.0; a2 <= 2.0; a2 += 1.0) {
                    const double lower =
                        beta[0] * a1 + beta[1] * a2 - hamiltonian(x, {a1, a2}, params);
                    if (direct < lower - 1e-12) dual_ok = false;
                }
            }
        }
        const Point2 b = drift(x, params);
        const double at_drift = lagrangian(x, {b.m_plus, b.m_minus}, params);
        worst_zero = std::max(worst_zero, at_drift);
        if (!(at_drift <= 1e-10)) zero_ok = false;
    }
    const double inf = std::numeric_limits<double>::infinity();
    const bool boundary_ok =
        lagrangian_1d(0.0, 0.3, -0.1) == inf && lagrangian_1d(0.3, 0.0, 0.1) == inf &&
        lagrangian_1d(0.0, 0.3, 0.1) < inf && lagrangian_1d(0.3, 0.0, -0.1) < inf &&
        lagrangian_1d(0.0, 0.0, 0.0) == 0.0 && lagrangian_1d(0.0, 0.0, 0.3) == inf;
    report(4, "Lagrangian correctness (Legendre suite)", dual_ok && zero_ok && boundary_ok,
           "max duality error " + fmt("%.2e", worst_dual) + ", max L at drift " +
               fmt("%.2e", worst_zero) + (boundary_ok ? ", boundary cases exact" : ", boundary WRONG"));
}

// ---- criterion 5: fluctuation law --------------------------------------

void criterion_5() {
    ModelParams params;
    params.n = 10000;
    params.rho = 0.5;
    const Environment env{5000, 10000};  // H = 0
    const AggregateState x0 = nearest_state(1.0 / 3.0, 1.0 / 6.0, env);
    const SampledPath path =
        simulate(params, env, x0, 550.0, 1905, RecordMode{RecordMode::grid, 0.05});
    const FluctuationSeries series = empirical_fluctuations(path, params, env);
    std::vector<double> window;
    for (std::size_t i = 0; i < series.times.size(); ++i)
        if (series.times[i] >= 50.0) window.push_back(series.x[i]);
    const double var = teststat::sample_variance(window);
    const double sigma11 = 5.0 / 9.0;
    const bool var_ok = std::abs(var - sigma11) <= 0.15 * sigma11;

    bool jac_ok = true;
    for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        ModelParams mp;
        mp.rho = rho;
        const auto j = drift_jacobian(interior_equilibrium(mp), mp);
        FluctuationParams fp;
        fp.rho = rho;
        const auto a = fp.drift_matrix();
        for (int k = 0; k < 4; ++k)
            if (std::abs(a[static_cast<std::size_t>(k)] - j[static_cast<std::size_t>(k)]) > 1e-10)
                jac_ok = false;
    }
    report(5, "fluctuation law (Theorem 3)", var_ok && jac_ok,
           "var " + fmt("%.4f", var) + " vs Sigma11 " + fmt("%.4f", sigma11) + " (" +
               fmt("%+.1f", 100.0 * (var / sigma11 - 1.0)) + "%), A=Jacobian(z) " +
               (jac_ok ? "to 1e-10" : "MISMATCH"));
}

// ---- criterion 6: simulator exactness ----------------------------------

void criterion_6() {
    // chi-squared of event proportions at N = 12 over 1e6 events
    ModelParams params;
    params.n = 12;
    params.rho = 0.5;
    const Environment env{6, 12};
    const AggregateState restart{4, 2};
    Rng rng(65);
    AggregateState s = restart;
    std::map<std::pair<std::int64_t, std::int64_t>, std::array<double, 8>> cells;
    for (int e = 0; e < 1000000; ++e) {
        const RateQuad r = transition_rates(s, env, params);
        if (r.all_zero()) {
            s = restart;
            continue;
        }
        auto& cell = cells[{s.k_plus, s.k_minus}];
        const double total = r.total();
        const double u = rng.uniform() * total;
        if (u < r.r1) {
            cell[0] += 1;
            ++s.k_plus;
        } else if (u < r.r1 + r.l1) {
            cell[1] += 1;
            --s.k_plus;
        } else if (u < r.r1 + r.l1 + r.r2) {
            cell[2] += 1;
            ++s.k_minus;
        } else {
            cell[3] += 1;
            --s.k_minus;
        }
        cell[4] += r.r1 / total;
        cell[5] += r.l1 / total;
        cell[6] += r.r2 / total;
        cell[7] += r.l2 / total;
    }
    double stat = 0.0;
    int dof = 0;
    for (const auto& [state, cell] : cells) {
        for (int k = 0; k < 4; ++k) {
            if (cell[static_cast<std::size_t>(k) + 4] >= 5.0) {
                const double obs = cell[static_cast<std::size_t>(k)];
                const double expect = cell[static_cast<std::size_t>(k) + 4];
                stat += (obs - expect) * (obs - expect) / expect;
                ++dof;
            }
        }
        --dof;
    }
    const double chi2_p = teststat::chi2_p_value(stat, dof);

    // two-sample KS of absorption times, full-spin vs aggregate, N = 50, rho = 1
    ModelParams voter;
    voter.n = 50;
    voter.rho = 1.0;
    const Environment venv{25, 50};
    const auto fields = canonical_fields(venv);
    std::vector<double> agg, full;
    for (int rep = 0; rep < 1000; ++rep) {
        const FirstPassage fp =
            first_passage_time(voter, venv, {13, 12}, StopRule{}, 1e7,
                               Rng::substream_seed(111, static_cast<std::uint64_t>(rep)));
        agg.push_back(fp.time);
        const SampledPath path = simulate_full_spin(
            voter, fields, canonical_spins(fields, {13, 12}), 1e7,
            Rng::substream_seed(222, static_cast<std::uint64_t>(rep)),
            RecordMode{RecordMode::none, 0});
        full.push_back(*path.absorption_time);
    }
    const double ks_p = teststat::ks_two_sample_p(agg, full);
    report(6, "simulator exactness (chi2 + KS)", chi2_p > 0.001 && ks_p > 0.01,
           "chi2 p " + fmt("%.4f", chi2_p) + " (>0.001), KS p " + fmt("%.4f", ks_p) +
               " (>0.01)");
}

// ---- criterion 7: byte-identical reruns of every subcommand -------------

#ifndef HETVOTER_BIN
#define HETVOTER_BIN "hetvoter"
#endif

void criterion_7() {
    const fs::path work = fs::temp_directory_path() / "hv_acceptance_cli";
    fs::remove_all(work);
    fs::create_directories(work);

    std::vector<std::pair<std::string, ExperimentConfig>> runs;
    {
        ExperimentConfig cfg;
        cfg.ode.horizon = 5.0;
        runs.emplace_back("ode", cfg);
    }
    {
        ExperimentConfig cfg;
        cfg.model.n = 80;
        cfg.model.seed = 4242;
        cfg.simulate.replicas = 20;
        cfg.simulate.cap = 1e6;
        cfg.simulate.record_path = true;
        cfg.simulate.horizon = 2.0;
        runs.emplace_back("simulate", cfg);
    }
    {
        ExperimentConfig cfg;
        cfg.qpot.target_m_plus = 0.4;
        cfg.qpot.target_m_minus = 0.2;
        cfg.qpot.segments = 60;
        cfg.qpot.max_iterations = 5000;
        runs.emplace_back("qpot", cfg);
    }
    {
        ExperimentConfig cfg;
        cfg.model.n = 60;
        runs.emplace_back("fpt", cfg);
    }
    {
        ExperimentConfig cfg;
        cfg.model.n = 400;
        cfg.fluct.horizon = 20.0;
        cfg.fluct.burn_in = 5.0;
        cfg.fluct.empirical = true;
        runs.emplace_back("fluct", cfg);
    }
    {
        ExperimentConfig cfg;
        cfg.scaling.n_list = {40, 50, 60, 70};
        cfg.scaling.with_boundary = false;
        runs.emplace_back("scaling", cfg);
    }

    bool all_ok = true;
    std::string detail;
    for (auto& [name, cfg] : runs) {
        const fs::path out = work / name;
        cfg.out_dir = out.string();
        const fs::path cfg_file = work / (name + ".cfg");
        write_file_atomic(cfg_file.string(), serialize_config(cfg, name));
        const std::string cmd = std::string(HETVOTER_BIN) + " " + name + " --config " +
                                cfg_file.string() + " > " + (work / (name + ".log")).string() +
                                " 2>&1";
        auto run_once = [&]() -> int { return std::system(cmd.c_str()); };
        if (run_once() != 0) {
            all_ok = false;
            detail += name + ": nonzero exit; ";
            continue;
        }
        std::map<std::string, std::string> snapshot;
        for (const auto& entry : fs::directory_iterator(out)) {
            if (entry.path().filename() == "manifest.json") continue;  // wall clock
            snapshot[entry.path().filename().string()] = read_file(entry.path().string());
        }
        if (run_once() != 0) {
            all_ok = false;
            detail += name + ": rerun failed; ";
            continue;
        }
        bool same = true;
        for (const auto& [file, content] : snapshot) {
            if (read_file((out / file).string()) != content) same = false;
        }
        if (!same) {
            all_ok = false;
            detail += name + ": differs; ";
        }
    }
    if (all_ok) detail = "all six subcommands byte-identical on rerun";
    report(7, "determinism of every subcommand", all_ok, detail);
    fs::remove_all(work);
}

}  // namespace

int main() {
    std::printf("hetvoter acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
