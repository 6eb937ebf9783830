#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hv/model.hpp"
#include "hv/parallel.hpp"

namespace hv {

/// What simulate() records. `events` keeps the full jump path (consecutive
/// states differ by one unit in one coordinate); `grid` samples the state on
/// a uniform time grid to bound output size.
struct RecordMode {
    enum Kind { events, grid, none } kind = events;
    double grid_dt = 0.1;
};

struct SampledPath {
    std::vector<double> times;           // event times (or grid times)
    std::vector<AggregateState> states;  // state after each time stamp
    bool absorbed = false;
    std::optional<double> absorption_time;  // unset means censored at horizon
    AggregateState final_state;
    double final_time = 0.0;
};

/// Stopping rule for first-passage measurements: absorption, or first exit
/// from the open disk of given center/radius in the (m+, m-) plane (a state
/// is inside iff strictly inside; matching the exact-solve oracle).
struct StopRule {
    enum Kind { absorption, exit_disk } kind = absorption;
    double center_m_plus = 0.0;
    double center_m_minus = 0.0;
    double radius = 0.0;

    bool stopped(const AggregateState& s, const Environment& env,
                 const ModelParams& params) const;
};

struct FirstPassage {
    double time = 0.0;
    bool censored = false;
};

struct ReplicaResult {
    std::uint64_t seed = 0;
    double time = 0.0;
    bool censored = false;
    double q_n = 0.0;
};

struct BatchSummary {
    std::vector<ReplicaResult> replicas;
    std::int64_t censored_count = 0;
    // over uncensored replicas only:
    double mean = 0.0;
    double variance = 0.0;
    std::vector<double> quantile_probs;  // {0.1, 0.25, 0.5, 0.75, 0.9}
    std::vector<double> quantiles;
    bool shared_env = true;
};

/// Statistically exact continuous-time simulation of the 4-rate aggregate
/// chain: exponential holding times at the total rate, event chosen
/// proportionally. Stops at absorption or horizon.
SampledPath simulate(const ModelParams& params, const Environment& env,
                     const AggregateState& x0, double horizon, std::uint64_t seed,
                     RecordMode record = {});
SampledPath simulate(const ModelParams& params, const Environment& env,
                     const AggregateState& x0, double horizon, Rng& rng,
                     RecordMode record = {});

/// Per-site event-driven simulation straight from the update rules (site
/// clocks at rate 1; copy the chosen neighbour if it matches the local field,
/// otherwise copy with probability rho). Validation oracle for simulate().
/// fields.size() == N; memory guard N <= 1e4.
SampledPath simulate_full_spin(const ModelParams& params,
                               const std::vector<std::uint8_t>& fields,
                               const std::vector<std::uint8_t>& spins0,
                               double horizon, std::uint64_t seed,
                               RecordMode record = {});

/// Canonical spin vector with the first count sites of each field class up.
std::vector<std::uint8_t> canonical_spins(const std::vector<std::uint8_t>& fields,
                                          const AggregateState& x0);
std::vector<std::uint8_t> canonical_fields(const Environment& env);

/// First-passage time without path recording; censoring at `cap` is reported,
/// never silently truncated.
FirstPassage first_passage_time(const ModelParams& params, const Environment& env,
                                const AggregateState& x0, const StopRule& rule,
                                double cap, std::uint64_t seed);
FirstPassage first_passage_time(const ModelParams& params, const Environment& env,
                                const AggregateState& x0, const StopRule& rule,
                                double cap, Rng& rng);

struct BatchOptions {
    std::int64_t replica_count = 1;
    StopRule rule;
    double cap = 1e9;
    bool shared_env = true;  // one quenched draw vs resampled per replica
    // start at the lattice state nearest the interior equilibrium unless set:
    std::optional<AggregateState> start;
    ExecConfig exec;
};

/// Independent replicas on substreams of params.seed (replica i uses
/// substream i+1; substream 0 draws the shared environment). Deterministic
/// and independent of the execution policy.
BatchSummary batch(const ModelParams& params, const BatchOptions& opts);

}  // namespace hv
