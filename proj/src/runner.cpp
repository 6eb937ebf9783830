#include "hv/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hv/errors.hpp"
#include "hv/fluctuations.hpp"
#include "hv/fpt.hpp"
#include "hv/io.hpp"
#include "hv/mean_field.hpp"
#include "hv/minaction.hpp"
#include "hv/simulate.hpp"

namespace hv {

namespace {

using nlohmann::json;

// ---- config file keys -------------------------------------------------

struct KeyBinding {
    std::string key;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

std::string bool_str(bool v) { return v ? "true" : "false"; }

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::invalid_argument("config: expected true/false, got '" + s + "'");
}

std::string int_list_str(const std::vector<std::int64_t>& v) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) ss << ",";
        ss << v[i];
    }
    return ss.str();
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoll(item));
    }
    return out;
}

#define BIND_NUM(KEY, FIELD, PARSE)                                     \
    {KEY, [](const ExperimentConfig& c) { return fmt_double(static_cast<double>(c.FIELD)); }, \
     [](ExperimentConfig& c, const std::string& v) { c.FIELD = PARSE(v); }}
#define BIND_BOOL(KEY, FIELD)                                          \
    {KEY, [](const ExperimentConfig& c) { return bool_str(c.FIELD); }, \
     [](ExperimentConfig& c, const std::string& v) { c.FIELD = parse_bool(v); }}
#define BIND_STR(KEY, FIELD)                            \
    {KEY, [](const ExperimentConfig& c) { return c.FIELD; }, \
     [](ExperimentConfig& c, const std::string& v) { c.FIELD = v; }}

double to_double(const std::string& v) { return std::stod(v); }
std::int64_t to_i64(const std::string& v) { return std::stoll(v); }
int to_int(const std::string& v) { return std::stoi(v); }
std::uint64_t to_u64(const std::string& v) { return std::stoull(v); }

const std::vector<KeyBinding>& bindings() {
    static const std::vector<KeyBinding> table = {
        BIND_NUM("model.n", model.n, to_i64),
        BIND_NUM("model.rho", model.rho, to_double),
        BIND_NUM("model.q", model.q, to_double),
        {"model.seed",
         [](const ExperimentConfig& c) { return std::to_string(c.model.seed); },
         [](ExperimentConfig& c, const std::string& v) { c.model.seed = to_u64(v); }},
        BIND_STR("out", out_dir),
        BIND_NUM("threads", threads, to_int),
        BIND_BOOL("serial", serial),
        BIND_NUM("ode.x0_m_plus", ode.x0_m_plus, to_double),
        BIND_NUM("ode.x0_m_minus", ode.x0_m_minus, to_double),
        BIND_NUM("ode.horizon", ode.horizon, to_double),
        BIND_NUM("ode.step", ode.step, to_double),
        BIND_STR("simulate.mode", simulate.mode),
        BIND_NUM("simulate.disk_m_plus", simulate.disk_m_plus, to_double),
        BIND_NUM("simulate.disk_m_minus", simulate.disk_m_minus, to_double),
        BIND_NUM("simulate.disk_radius", simulate.disk_radius, to_double),
        BIND_NUM("simulate.replicas", simulate.replicas, to_i64),
        BIND_NUM("simulate.cap", simulate.cap, to_double),
        BIND_BOOL("simulate.shared_env", simulate.shared_env),
        BIND_NUM("simulate.start_k_plus", simulate.start_k_plus, to_i64),
        BIND_NUM("simulate.start_k_minus", simulate.start_k_minus, to_i64),
        BIND_NUM("simulate.max_censored_fraction", simulate.max_censored_fraction, to_double),
        BIND_BOOL("simulate.record_path", simulate.record_path),
        BIND_NUM("simulate.grid_dt", simulate.grid_dt, to_double),
        BIND_NUM("simulate.horizon", simulate.horizon, to_double),
        BIND_NUM("qpot.target_m_plus", qpot.target_m_plus, to_double),
        BIND_NUM("qpot.target_m_minus", qpot.target_m_minus, to_double),
        BIND_NUM("qpot.radius", qpot.radius, to_double),
        BIND_NUM("qpot.n_points", qpot.n_points, to_int),
        BIND_NUM("qpot.segments", qpot.segments, to_int),
        BIND_NUM("qpot.max_iterations", qpot.max_iterations, to_int),
        BIND_NUM("qpot.restarts", qpot.restarts, to_int),
        BIND_NUM("qpot.tol", qpot.tol, to_double),
        BIND_BOOL("qpot.warm_start", qpot.warm_start),
        BIND_STR("fpt.mode", fpt.mode),
        BIND_NUM("fpt.radius", fpt.radius, to_double),
        BIND_NUM("fpt.disk_m_plus", fpt.disk_m_plus, to_double),
        BIND_NUM("fpt.disk_m_minus", fpt.disk_m_minus, to_double),
        BIND_NUM("fpt.start_k_plus", fpt.start_k_plus, to_i64),
        BIND_NUM("fpt.start_k_minus", fpt.start_k_minus, to_i64),
        BIND_BOOL("fpt.pinned_env", fpt.pinned_env),
        BIND_STR("fluct.h_source", fluct.h_source),
        BIND_NUM("fluct.h_value", fluct.h_value, to_double),
        BIND_NUM("fluct.horizon", fluct.horizon, to_double),
        BIND_NUM("fluct.step", fluct.step, to_double),
        BIND_NUM("fluct.burn_in", fluct.burn_in, to_double),
        BIND_BOOL("fluct.empirical", fluct.empirical),
        BIND_NUM("fluct.x0_x", fluct.x0_x, to_double),
        BIND_NUM("fluct.x0_y", fluct.x0_y, to_double),
        {"scaling.n_list",
         [](const ExperimentConfig& c) { return int_list_str(c.scaling.n_list); },
         [](ExperimentConfig& c, const std::string& v) { c.scaling.n_list = parse_int_list(v); }},
        BIND_STR("scaling.mode", scaling.mode),
        BIND_NUM("scaling.radius", scaling.radius, to_double),
        BIND_BOOL("scaling.pinned_env", scaling.pinned_env),
        BIND_BOOL("scaling.with_boundary", scaling.with_boundary),
        BIND_NUM("scaling.n_points", scaling.n_points, to_int),
        BIND_NUM("scaling.segments", scaling.segments, to_int),
        BIND_NUM("scaling.tol", scaling.tol, to_double),
    };
    return table;
}

#undef BIND_NUM
#undef BIND_BOOL
#undef BIND_STR

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// ---- output plumbing ---------------------------------------------------

class RunWriter {
  public:
    RunWriter(const ExperimentConfig& cfg, std::string subcommand)
        : cfg_(cfg), subcommand_(std::move(subcommand)),
          t0_(std::chrono::steady_clock::now()) {
        std::filesystem::create_directories(cfg.out_dir);
    }

    void write(const std::string& name, std::string_view content) {
        write_file_atomic(cfg_.out_dir + "/" + name, content);
        outputs_.emplace_back(name, fnv1a64_hex(content));
    }

    // config echo + checksums; written last so a manifest implies complete outputs
    void finish(RunResult& result) {
        const std::string echo = serialize_config(cfg_, subcommand_);
        write("config.txt", echo);
        json manifest;
        manifest["version"] = kToolVersion;
        manifest["subcommand"] = subcommand_;
        manifest["config"] = echo;
        manifest["wall_clock_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
        json outs = json::array();
        for (const auto& [file, sum] : outputs_) {
            outs.push_back(json{{"file", file}, {"fnv1a64", sum}});
            result.files.push_back(file);
        }
        manifest["outputs"] = outs;
        write_file_atomic(cfg_.out_dir + "/manifest.json", manifest.dump(2) + "\n");
    }

  private:
    const ExperimentConfig& cfg_;
    std::string subcommand_;
    std::chrono::steady_clock::time_point t0_;
    std::vector<std::pair<std::string, std::string>> outputs_;
};

json params_json(const ModelParams& p) {
    return json{{"n", p.n}, {"rho", p.rho}, {"q", p.q}, {"seed", p.seed}};
}

const char* kind_name(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::all_ones: return "all_ones";
        case EquilibriumKind::all_zeros: return "all_zeros";
        default: return "interior";
    }
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        default: return "non_admissible";
    }
}

StopRule make_disk_rule(const ModelParams& model, double mp, double mm, double radius) {
    StopRule rule;
    rule.kind = StopRule::exit_disk;
    if (mp < 0.0 || mm < 0.0) {
        const Point2 z = interior_equilibrium(model);
        rule.center_m_plus = z.m_plus;
        rule.center_m_minus = z.m_minus;
    } else {
        rule.center_m_plus = mp;
        rule.center_m_minus = mm;
    }
    rule.radius = radius;
    return rule;
}

AggregateState default_start(const ModelParams& model, const Environment& env,
                             std::int64_t kp, std::int64_t km) {
    if (kp >= 0 && km >= 0) {
        const AggregateState s{kp, km};
        s.validate(env);
        return s;
    }
    if (model.rho >= 1.0)
        throw std::invalid_argument(
            "start state required for rho = 1 (no interior equilibrium); set start_k_plus/minus");
    const Point2 z = interior_equilibrium(model);
    return nearest_state(z.m_plus, z.m_minus, env);
}

std::string csv_point_series(const char* header, const std::vector<double>& t,
                             const std::vector<double>& a, const std::vector<double>& b) {
    std::ostringstream ss;
    ss << header << "\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        ss << fmt_double(t[i]) << "," << fmt_double(a[i]) << "," << fmt_double(b[i]) << "\n";
    return ss.str();
}

}  // namespace

void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        bool found = false;
        for (const auto& b : bindings()) {
            if (b.key == key) {
                b.set(cfg, value);
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    apply_config_text(cfg, read_file(path));
}

std::vector<std::string> config_key_names() {
    std::vector<std::string> names;
    for (const auto& b : bindings()) names.push_back(b.key);
    return names;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& b : bindings()) {
        if (b.key == key) {
            b.set(cfg, value);
            return;
        }
    }
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

std::string serialize_config(const ExperimentConfig& cfg, const std::string& subcommand) {
    std::ostringstream ss;
    for (const auto& b : bindings()) {
        const bool common = b.key.rfind("model.", 0) == 0 || b.key == "out" ||
                            b.key == "threads" || b.key == "serial";
        const bool active = b.key.rfind(subcommand + ".", 0) == 0;
        if (common || active) ss << b.key << " = " << b.get(cfg) << "\n";
    }
    return ss.str();
}

RunResult run_ode(const ExperimentConfig& cfg) {
    cfg.model.validate();
    RunResult result;
    RunWriter out(cfg, "ode");

    const Trajectory traj = integrate_ode({cfg.ode.x0_m_plus, cfg.ode.x0_m_minus},
                                          cfg.model, cfg.ode.horizon, cfg.ode.step);
    std::ostringstream csv;
    csv << "t,m_plus,m_minus\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        csv << fmt_double(traj.times[i]) << "," << fmt_double(traj.points[i].m_plus) << ","
            << fmt_double(traj.points[i].m_minus) << "\n";
    out.write("trajectory.csv", csv.str());

    const EquilibriaResult eq = equilibria(cfg.model);
    json j;
    j["params"] = params_json(cfg.model);
    j["degenerate"] = eq.degenerate;
    j["admissibility_threshold"] = eq.admissibility_threshold;
    json list = json::array();
    for (const Equilibrium& e : eq.equilibria) {
        list.push_back(json{
            {"m_plus", e.location.m_plus},
            {"m_minus", e.location.m_minus},
            {"kind", kind_name(e.kind)},
            {"eigenvalues", json::array({json::array({e.eigenvalues[0].real(), e.eigenvalues[0].imag()}),
                                         json::array({e.eigenvalues[1].real(), e.eigenvalues[1].imag()})})},
            {"classification", stability_name(e.classification)},
        });
    }
    j["equilibria"] = list;
    out.write("equilibria.json", j.dump(2) + "\n");
    out.finish(result);
    return result;
}

RunResult run_simulate(const ExperimentConfig& cfg) {
    cfg.model.validate();
    const auto& sc = cfg.simulate;
    if (sc.replicas < 1) throw std::invalid_argument("simulate: replicas must be >= 1");
    if (sc.mode != "absorption" && sc.mode != "exit")
        throw std::invalid_argument("simulate: mode must be absorption or exit");

    BatchOptions opts;
    opts.replica_count = sc.replicas;
    opts.cap = sc.cap;
    opts.shared_env = sc.shared_env;
    opts.exec = cfg.exec();
    if (sc.mode == "exit")
        opts.rule = make_disk_rule(cfg.model, sc.disk_m_plus, sc.disk_m_minus, sc.disk_radius);
    if (sc.start_k_plus >= 0 && sc.start_k_minus >= 0)
        opts.start = AggregateState{sc.start_k_plus, sc.start_k_minus};
    else if (cfg.model.rho >= 1.0)
        throw std::invalid_argument(
            "simulate: start state required for rho = 1; set simulate.start_k_plus/minus");

    const BatchSummary summary = batch(cfg.model, opts);
    const double censored_fraction =
        static_cast<double>(summary.censored_count) / static_cast<double>(sc.replicas);
    if (censored_fraction > sc.max_censored_fraction)
        throw numerical_error("simulate: censored fraction " + fmt_double(censored_fraction) +
                              " above threshold");

    RunResult result;
    RunWriter out(cfg, "simulate");

    json j;
    j["params"] = params_json(cfg.model);
    j["mode"] = sc.mode;
    json env;
    env["shared"] = summary.shared_env;
    if (summary.shared_env && !summary.replicas.empty())
        env["q_n"] = summary.replicas.front().q_n;
    j["env"] = env;
    json reps = json::array();
    for (const ReplicaResult& r : summary.replicas) {
        json rep{{"seed", r.seed}, {"time", r.time}, {"censored", r.censored}};
        if (!summary.shared_env) rep["q_n"] = r.q_n;
        reps.push_back(rep);
    }
    j["replicas"] = reps;
    j["summary"] = json{{"mean", summary.mean},
                        {"variance", summary.variance},
                        {"quantile_probs", summary.quantile_probs},
                        {"quantiles", summary.quantiles},
                        {"censored_count", summary.censored_count}};
    out.write("batch.json", j.dump(2) + "\n");

    if (sc.record_path) {
        // replica 1's environment and stream, with recording on
        const std::uint64_t sub = Rng::substream_seed(cfg.model.seed, 1);
        Rng rng(sub);
        Environment env_r;
        if (sc.shared_env) {
            Rng env_rng = Rng::substream(cfg.model.seed, 0);
            env_r = sample_environment(cfg.model, env_rng);
        } else {
            env_r = sample_environment(cfg.model, rng);
        }
        const AggregateState x0 =
            default_start(cfg.model, env_r, sc.start_k_plus, sc.start_k_minus);
        RecordMode record;
        if (sc.grid_dt > 0.0) record = RecordMode{RecordMode::grid, sc.grid_dt};
        const SampledPath path = simulate(cfg.model, env_r, x0, sc.horizon, rng, record);
        std::ostringstream csv;
        csv << "t,k_plus,k_minus\n";
        for (std::size_t i = 0; i < path.times.size(); ++i)
            csv << fmt_double(path.times[i]) << "," << path.states[i].k_plus << ","
                << path.states[i].k_minus << "\n";
        out.write("path.csv", csv.str());
    }
    out.finish(result);
    return result;
}

RunResult run_qpot(const ExperimentConfig& cfg) {
    cfg.model.validate();
    const auto& qc = cfg.qpot;
    QuasiPotentialOptions opts;
    opts.segments = qc.segments;
    opts.tol = qc.tol;
    opts.max_iterations = qc.max_iterations;
    opts.random_restarts = qc.restarts;
    opts.seed = cfg.model.seed;

    RunResult result;
    RunWriter out(cfg, "qpot");

    if (qc.target_m_plus >= 0.0 && qc.target_m_minus >= 0.0) {
        const QuasiPotentialResult r =
            quasi_potential({qc.target_m_plus, qc.target_m_minus}, cfg.model, opts);
        std::ostringstream csv;
        csv << "segment,t_start,m_plus,m_minus\n";
        double t = 0.0;
        for (std::size_t i = 0; i < r.path.points.size(); ++i) {
            csv << i << "," << fmt_double(t) << "," << fmt_double(r.path.points[i].m_plus)
                << "," << fmt_double(r.path.points[i].m_minus) << "\n";
            if (i < r.path.durations.size()) t += r.path.durations[i];
        }
        out.write("path.csv", csv.str());
        const Point2 z = interior_equilibrium(cfg.model);
        json j{{"params", params_json(cfg.model)},
               {"target", json::array({qc.target_m_plus, qc.target_m_minus})},
               {"z", json::array({z.m_plus, z.m_minus})},
               {"value", r.value},
               {"converged", r.converged},
               {"gradient_norm", r.gradient_norm},
               {"restarts_used", r.restarts_used}};
        out.write("qpot.json", j.dump(2) + "\n");
        out.finish(result);
        if (!r.converged) result.exit_code = 3;
        return result;
    }

    const Point2 z = interior_equilibrium(cfg.model);
    BoundaryMinOptions bopts;
    bopts.n_points = qc.n_points;
    bopts.warm_start = qc.warm_start;
    bopts.exec = cfg.exec();
    const BoundaryProfile profile = boundary_min(z, qc.radius, cfg.model, opts, bopts);
    std::ostringstream csv;
    csv << "angle,V\n";
    for (std::size_t i = 0; i < profile.angles.size(); ++i)
        csv << fmt_double(profile.angles[i]) << "," << fmt_double(profile.values[i]) << "\n";
    out.write("profile.csv", csv.str());
    bool all_converged = true;
    for (bool c : profile.converged) all_converged = all_converged && c;
    json j{{"params", params_json(cfg.model)},
           {"center", json::array({z.m_plus, z.m_minus})},
           {"radius", qc.radius},
           {"V_boundary", profile.min_value},
           {"argmin", json::array({profile.argmin.m_plus, profile.argmin.m_minus})},
           {"argmin_angle", profile.argmin_angle},
           {"all_converged", all_converged}};
    out.write("boundary.json", j.dump(2) + "\n");
    out.finish(result);
    if (!all_converged) result.exit_code = 3;
    return result;
}

RunResult run_fpt(const ExperimentConfig& cfg) {
    cfg.model.validate();
    const auto& fc = cfg.fpt;
    if (fc.mode != "absorption" && fc.mode != "exit")
        throw std::invalid_argument("fpt: mode must be absorption or exit");

    FptProblem p;
    p.params = cfg.model;
    p.env = fc.pinned_env ? pinned_environment(cfg.model) : sample_environment(cfg.model);
    if (fc.mode == "exit")
        p.rule = make_disk_rule(cfg.model, fc.disk_m_plus, fc.disk_m_minus, fc.radius);
    p.start = default_start(cfg.model, p.env, fc.start_k_plus, fc.start_k_minus);
    const double mean_time = mean_exit_time_exact(p);

    RunResult result;
    RunWriter out(cfg, "fpt");
    json j{{"params", params_json(cfg.model)},
           {"env", json{{"n_plus", p.env.n_plus}, {"q_n", p.env.q_n()}, {"pinned", fc.pinned_env}}},
           {"mode", fc.mode},
           {"start", json::array({p.start.k_plus, p.start.k_minus})},
           {"mean_time", mean_time}};
    out.write("fpt.json", j.dump(2) + "\n");
    out.finish(result);
    return result;
}

RunResult run_fluct(const ExperimentConfig& cfg) {
    cfg.model.validate();
    const auto& fc = cfg.fluct;
    if (fc.h_source != "value" && fc.h_source != "environment")
        throw std::invalid_argument("fluct: h_source must be value or environment");

    Environment env = pinned_environment(cfg.model);
    double h = fc.h_value;
    if (fc.h_source == "environment") {
        env = sample_environment(cfg.model);
        h = quenched_h(env, cfg.model);
    }
    FluctuationParams fp;
    fp.rho = cfg.model.rho;
    fp.h = h;
    const FluctuationSeries series =
        integrate_sde({fc.x0_x, fc.x0_y}, fp, fc.horizon, fc.step, cfg.model.seed);
    const StationaryMoments sm = stationary_moments(fp);

    RunResult result;
    RunWriter out(cfg, "fluct");
    out.write("series.csv", csv_point_series("t,X,Y", series.times, series.x, series.y));
    json j{{"params", params_json(cfg.model)},
           {"H", h},
           {"mean", json::array({sm.mean[0], sm.mean[1]})},
           {"cov", json::array({json::array({sm.cov[0], sm.cov[1]}),
                                json::array({sm.cov[2], sm.cov[3]})})}};

    if (fc.empirical) {
        const AggregateState x0 = default_start(cfg.model, env, -1, -1);
        const SampledPath path = simulate(cfg.model, env, x0, fc.horizon, cfg.model.seed,
                                          RecordMode{RecordMode::grid, fc.step});
        if (path.absorbed)
            throw numerical_error("fluct: chain absorbed inside the analysis window");
        const FluctuationSeries emp = empirical_fluctuations(path, cfg.model, env);
        out.write("empirical.csv", csv_point_series("t,X,Y", emp.times, emp.x, emp.y));
        double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < emp.times.size(); ++i) {
            if (emp.times[i] < fc.burn_in) continue;
            sx += emp.x[i];
            sy += emp.y[i];
            ++count;
        }
        if (count > 1) {
            const double mx = sx / static_cast<double>(count);
            const double my = sy / static_cast<double>(count);
            for (std::size_t i = 0; i < emp.times.size(); ++i) {
                if (emp.times[i] < fc.burn_in) continue;
                sxx += (emp.x[i] - mx) * (emp.x[i] - mx);
                syy += (emp.y[i] - my) * (emp.y[i] - my);
            }
            j["empirical"] = json{{"mean_x", mx},
                                  {"mean_y", my},
                                  {"var_x", sxx / static_cast<double>(count - 1)},
                                  {"var_y", syy / static_cast<double>(count - 1)},
                                  {"burn_in", fc.burn_in},
                                  {"samples", count}};
        }
    }
    out.write("moments.json", j.dump(2) + "\n");
    out.finish(result);
    return result;
}

RunResult run_scaling(const ExperimentConfig& cfg) {
    cfg.model.validate();
    const auto& sc = cfg.scaling;
    if (sc.n_list.size() < 4)
        throw std::invalid_argument("scaling: n_list must have at least 4 entries");
    if (sc.mode != "absorption" && sc.mode != "exit")
        throw std::invalid_argument("scaling: mode must be absorption or exit");

    std::vector<double> times(sc.n_list.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(sc.n_list.size()), cfg.exec(), [&](std::int64_t i) {
        ModelParams params = cfg.model;
        params.n = sc.n_list[static_cast<std::size_t>(i)];
        FptProblem p;
        p.params = params;
        p.env = sc.pinned_env ? pinned_environment(params) : sample_environment(params);
        if (sc.mode == "exit") p.rule = make_disk_rule(params, -1.0, -1.0, sc.radius);
        p.start = default_start(params, p.env, -1, -1);
        times[static_cast<std::size_t>(i)] = mean_exit_time_exact(p);
    });
    const ScalingFit fit = scaling_fit(sc.n_list, times);

    RunResult result;
    RunWriter out(cfg, "scaling");
    std::ostringstream csv;
    csv << "N,mean_time,log_mean_time\n";
    for (std::size_t i = 0; i < sc.n_list.size(); ++i)
        csv << sc.n_list[i] << "," << fmt_double(times[i]) << ","
            << fmt_double(fit.log_mean_times[i]) << "\n";
    out.write("scaling.csv", csv.str());

    json j{{"params", params_json(cfg.model)},
           {"mode", sc.mode},
           {"n_list", sc.n_list},
           {"slope", fit.slope},
           {"intercept", fit.intercept},
           {"r_squared", fit.r_squared},
           {"residual_norm", fit.residual_norm}};

    if (sc.with_boundary && sc.mode == "exit") {
        QuasiPotentialOptions opts;
        opts.segments = sc.segments;
        opts.tol = sc.tol;
        opts.seed = cfg.model.seed;
        BoundaryMinOptions bopts;
        bopts.n_points = sc.n_points;
        bopts.exec = cfg.exec();
        const Point2 z = interior_equilibrium(cfg.model);
        const BoundaryProfile profile = boundary_min(z, sc.radius, cfg.model, opts, bopts);
        std::ostringstream pcsv;
        pcsv << "angle,V\n";
        for (std::size_t i = 0; i < profile.angles.size(); ++i)
            pcsv << fmt_double(profile.angles[i]) << "," << fmt_double(profile.values[i]) << "\n";
        out.write("profile.csv", pcsv.str());
        j["V_boundary"] = profile.min_value;
        j["relative_gap"] = (fit.slope - profile.min_value) / profile.min_value;
    }
    out.write("report.json", j.dump(2) + "\n");
    out.finish(result);
    return result;
}

RunResult run_subcommand(const std::string& name, const ExperimentConfig& cfg) {
    if (name == "ode") return run_ode(cfg);
    if (name == "simulate") return run_simulate(cfg);
    if (name == "qpot") return run_qpot(cfg);
    if (name == "fpt") return run_fpt(cfg);
    if (name == "fluct") return run_fluct(cfg);
    if (name == "scaling") return run_scaling(cfg);
    throw std::invalid_argument("unknown subcommand '" + name + "'");
}

}  // namespace hv
