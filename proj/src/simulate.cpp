#include "hv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hv/mean_field.hpp"

namespace hv {

bool StopRule::stopped(const AggregateState& s, const Environment& env,
                       const ModelParams& params) const {
    if (kind == absorption) return is_absorbing(s, env);
    const auto [mp, mm] = order_parameters(s, params);
    const double dx = mp - center_m_plus;
    const double dy = mm - center_m_minus;
    return dx * dx + dy * dy >= radius * radius;
}

namespace {

// One Gillespie jump. Returns false when the state is absorbing.
bool gillespie_step(const ModelParams& params, const Environment& env,
                    AggregateState& s, double& t, Rng& rng) {
    const RateQuad r = transition_rates(s, env, params);
    const double total = r.total();
    if (total == 0.0) return false;
    t += rng.exponential(total);
    const double u = rng.uniform() * total;
    if (u < r.r1) {
        ++s.k_plus;
    } else if (u < r.r1 + r.l1) {
        --s.k_plus;
    } else if (u < r.r1 + r.l1 + r.r2) {
        ++s.k_minus;
    } else {
        --s.k_minus;
    }
    return true;
}

struct PathRecorder {
    RecordMode mode;
    double horizon;
    SampledPath out;
    double next_grid = 0.0;

    void start(double t0, const AggregateState& s) {
        if (mode.kind == RecordMode::none) return;
        out.times.push_back(t0);
        out.states.push_back(s);
        next_grid = mode.grid_dt;
    }
    // state `s` holds on [t_prev, t_event); called before applying the event
    void upto(double t_event, const AggregateState& s) {
        if (mode.kind != RecordMode::grid) return;
        while (next_grid < t_event && next_grid <= horizon + 1e-12) {
            out.times.push_back(next_grid);
            out.states.push_back(s);
            next_grid += mode.grid_dt;
        }
    }
    void event(double t, const AggregateState& s) {
        if (mode.kind != RecordMode::events) return;
        out.times.push_back(t);
        out.states.push_back(s);
    }
    // absorbed at t_final: the state is frozen, fill the rest of the grid
    void finish_frozen(const AggregateState& s) {
        if (mode.kind != RecordMode::grid) return;
        while (next_grid <= horizon + 1e-12) {
            out.times.push_back(next_grid);
            out.states.push_back(s);
            next_grid += mode.grid_dt;
        }
    }
};

}  // namespace

SampledPath simulate(const ModelParams& params, const Environment& env,
                     const AggregateState& x0, double horizon, Rng& rng,
                     RecordMode record) {
    params.validate();
    env.validate();
    x0.validate(env);
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be > 0");

    AggregateState s = x0;
    double t = 0.0;
    PathRecorder rec{record, horizon, {}, 0.0};
    rec.start(0.0, s);

    for (;;) {
        AggregateState prev = s;
        double t_prev = t;
        if (!gillespie_step(params, env, s, t, rng)) {
            rec.finish_frozen(prev);
            rec.out.absorbed = true;
            rec.out.absorption_time = t_prev;
            rec.out.final_state = prev;
            rec.out.final_time = t_prev;
            return rec.out;
        }
        if (t > horizon) {
            rec.upto(horizon + 0.5 * record.grid_dt, prev);  // grid points up to horizon
            rec.out.absorbed = false;
            rec.out.final_state = prev;
            rec.out.final_time = horizon;
            return rec.out;
        }
        rec.upto(t, prev);
        rec.event(t, s);
    }
}

SampledPath simulate(const ModelParams& params, const Environment& env,
                     const AggregateState& x0, double horizon, std::uint64_t seed,
                     RecordMode record) {
    Rng rng(seed);
    return simulate(params, env, x0, horizon, rng, record);
}

std::vector<std::uint8_t> canonical_fields(const Environment& env) {
    std::vector<std::uint8_t> fields(static_cast<std::size_t>(env.n), 0);
    std::fill(fields.begin(), fields.begin() + env.n_plus, std::uint8_t{1});
    return fields;
}

std::vector<std::uint8_t> canonical_spins(const std::vector<std::uint8_t>& fields,
                                          const AggregateState& x0) {
    std::vector<std::uint8_t> spins(fields.size(), 0);
    std::int64_t up_plus = x0.k_plus, up_minus = x0.k_minus;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] && up_plus > 0) {
            spins[i] = 1;
            --up_plus;
        } else if (!fields[i] && up_minus > 0) {
            spins[i] = 1;
            --up_minus;
        }
    }
    if (up_plus != 0 || up_minus != 0)
        throw std::invalid_argument("canonical_spins: state does not fit the field vector");
    return spins;
}

SampledPath simulate_full_spin(const ModelParams& params,
                               const std::vector<std::uint8_t>& fields,
                               const std::vector<std::uint8_t>& spins0,
                               double horizon, std::uint64_t seed,
                               RecordMode record) {
    params.validate();
    if (params.n > 10000)
        throw std::invalid_argument("simulate_full_spin: N <= 1e4 (memory guard)");
    if (static_cast<std::int64_t>(fields.size()) != params.n ||
        spins0.size() != fields.size())
        throw std::invalid_argument("simulate_full_spin: field/spin vectors must have size N");
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate_full_spin: horizon must be > 0");

    const std::int64_t n = params.n;
    std::vector<std::uint8_t> spins = spins0;
    AggregateState s{0, 0};
    for (std::int64_t i = 0; i < n; ++i) {
        if (spins[i]) (fields[i] ? s.k_plus : s.k_minus) += 1;
    }
    Environment env{std::count(fields.begin(), fields.end(), std::uint8_t{1}), n};

    Rng rng(seed);
    double t = 0.0;
    PathRecorder rec{record, horizon, {}, 0.0};
    rec.start(0.0, s);

    while (!is_absorbing(s, env)) {
        // site clocks are iid exp(1): next ring after exp(N), at a uniform site
        const double dt = rng.exponential(static_cast<double>(n));
        const double t_next = t + dt;
        if (t_next > horizon) {
            rec.upto(horizon + 0.5 * record.grid_dt, s);
            rec.out.absorbed = false;
            rec.out.final_state = s;
            rec.out.final_time = horizon;
            return rec.out;
        }
        const auto i = static_cast<std::int64_t>(rng.uniform() * static_cast<double>(n));
        const auto j = static_cast<std::int64_t>(rng.uniform() * static_cast<double>(n));
        const std::uint8_t target = spins[j];
        bool adopt = (target == fields[i]);
        if (!adopt) adopt = rng.uniform() < params.rho;
        rec.upto(t_next, s);
        t = t_next;
        if (adopt && spins[i] != target) {
            const std::int64_t delta = target ? 1 : -1;
            (fields[i] ? s.k_plus : s.k_minus) += delta;
            spins[i] = target;
            rec.event(t, s);
        }
    }
    rec.finish_frozen(s);
    rec.out.absorbed = true;
    rec.out.absorption_time = t;
    rec.out.final_state = s;
    rec.out.final_time = t;
    return rec.out;
}

FirstPassage first_passage_time(const ModelParams& params, const Environment& env,
                                const AggregateState& x0, const StopRule& rule,
                                double cap, Rng& rng) {
    params.validate();
    env.validate();
    x0.validate(env);
    if (!(cap > 0.0)) throw std::invalid_argument("first_passage_time: cap must be > 0");

    AggregateState s = x0;
    double t = 0.0;
    if (rule.stopped(s, env, params)) return {0.0, false};
    for (;;) {
        if (!gillespie_step(params, env, s, t, rng)) {
            // absorbed; in exit mode an absorbed interior chain can never leave
            if (rule.kind == StopRule::absorption) return {t, false};
            return {cap, true};
        }
        if (t > cap) return {cap, true};
        if (rule.stopped(s, env, params)) return {t, false};
    }
}

FirstPassage first_passage_time(const ModelParams& params, const Environment& env,
                                const AggregateState& x0, const StopRule& rule,
                                double cap, std::uint64_t seed) {
    Rng rng(seed);
    return first_passage_time(params, env, x0, rule, cap, rng);
}

BatchSummary batch(const ModelParams& params, const BatchOptions& opts) {
    params.validate();
    if (opts.replica_count < 1)
        throw std::invalid_argument("batch: replica_count must be >= 1");

    Environment shared;
    if (opts.shared_env) {
        Rng env_rng = Rng::substream(params.seed, 0);
        shared = sample_environment(params, env_rng);
    }
    Point2 z{0.0, 0.0};
    if (!opts.start) z = interior_equilibrium(params);  // rejects rho = 1 up front

    BatchSummary out;
    out.shared_env = opts.shared_env;
    out.replicas.resize(static_cast<std::size_t>(opts.replica_count));

    parallel_for(opts.replica_count, opts.exec, [&](std::int64_t i) {
        const std::uint64_t sub = Rng::substream_seed(params.seed, static_cast<std::uint64_t>(i) + 1);
        Rng rng(sub);  // replica stream: environment draw (annealed mode), then the path
        Environment env = shared;
        if (!opts.shared_env) env = sample_environment(params, rng);
        const AggregateState x0 =
            opts.start ? *opts.start : nearest_state(z.m_plus, z.m_minus, env);
        const FirstPassage fp = first_passage_time(params, env, x0, opts.rule, opts.cap, rng);
        out.replicas[static_cast<std::size_t>(i)] =
            ReplicaResult{sub, fp.time, fp.censored, env.q_n()};
    });

    std::vector<double> uncensored;
    for (const auto& r : out.replicas) {
        if (r.censored) {
            ++out.censored_count;
        } else {
            uncensored.push_back(r.time);
        }
    }
    if (!uncensored.empty()) {
        double sum = 0.0;
        for (double v : uncensored) sum += v;
        out.mean = sum / static_cast<double>(uncensored.size());
        double ss = 0.0;
        for (double v : uncensored) ss += (v - out.mean) * (v - out.mean);
        out.variance = uncensored.size() > 1
                           ? ss / static_cast<double>(uncensored.size() - 1)
                           : 0.0;
        std::sort(uncensored.begin(), uncensored.end());
        out.quantile_probs = {0.1, 0.25, 0.5, 0.75, 0.9};
        for (double p : out.quantile_probs) {
            const double pos = p * static_cast<double>(uncensored.size() - 1);
            const auto lo = static_cast<std::size_t>(pos);
            const std::size_t hi = std::min(lo + 1, uncensored.size() - 1);
            const double frac = pos - static_cast<double>(lo);
            out.quantiles.push_back(uncensored[lo] * (1.0 - frac) + uncensored[hi] * frac);
        }
    }
    return out;
}

}  // namespace hv
