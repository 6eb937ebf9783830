#pragma once

#include <cstdint>
#include <utility>

#include "hv/rng.hpp"

namespace hv {

/// Population size, imitation probability across the field, field frequency
/// and the root RNG seed. q >= 1/2 loses no generality (field symmetry).
struct ModelParams {
    std::int64_t n = 100;    // population size N
    double rho = 0.5;        // imitation probability against the local field
    double q = 0.5;          // P(h_i = 1), in [1/2, 1)
    std::uint64_t seed = 1;

    void validate() const;
};

/// Quenched field realization, summarized by the number of h_i = 1 sites
/// (the aggregate chain depends on h only through this count).
struct Environment {
    std::int64_t n_plus = 0;
    std::int64_t n = 0;

    double q_n() const { return static_cast<double>(n_plus) / static_cast<double>(n); }
    std::int64_t n_minus() const { return n - n_plus; }
    void validate() const;
};

/// Up-spin counts among field-1 and field-0 sites; the exact Markov chain
/// state. Integer arithmetic throughout so absorption is detected exactly.
struct AggregateState {
    std::int64_t k_plus = 0;
    std::int64_t k_minus = 0;

    std::int64_t total() const { return k_plus + k_minus; }
    bool operator==(const AggregateState&) const = default;
    void validate(const Environment& env) const;
};

/// The four aggregate transition rates (events per unit time):
/// r1: k_plus up, l1: k_plus down, r2: k_minus up, l2: k_minus down.
struct RateQuad {
    double r1 = 0, l1 = 0, r2 = 0, l2 = 0;

    double total() const { return r1 + l1 + r2 + l2; }
    bool all_zero() const { return r1 == 0.0 && l1 == 0.0 && r2 == 0.0 && l2 == 0.0; }
};

/// Draws n_plus ~ Binomial(N, q) from the seed; deterministic given the seed.
Environment sample_environment(const ModelParams& params);
Environment sample_environment(const ModelParams& params, Rng& rng);

/// Environment pinned to n_plus = round(N q); used by scaling studies so the
/// exponent is not contaminated by q_N fluctuations.
Environment pinned_environment(const ModelParams& params);

/// Exact rates of the aggregate chain conditioned on the environment
/// (empirical q_N, not nominal q). With x = k+/N, y = k-/N, m = x+y:
///   r1 = N (q_N - x) m,  l1 = N rho x (1-m),
///   r2 = N rho (1-q_N-y) m,  l2 = N y (1-m).
/// If nominal_q is set, q_N is replaced by params.q for comparison runs.
RateQuad transition_rates(const AggregateState& state, const Environment& env,
                          const ModelParams& params, bool nominal_q = false);

/// (m+, m-) = (k_plus/N, k_minus/N).
std::pair<double, double> order_parameters(const AggregateState& state,
                                           const ModelParams& params);

/// True iff the state is all-zero or all-one (the two absorbing states).
bool is_absorbing(const AggregateState& state, const Environment& env);

/// Lattice state nearest to a point of the (m+, m-) plane, restricted to the
/// valid integer box; ties broken toward larger k_plus, then larger k_minus.
AggregateState nearest_state(double m_plus, double m_minus, const Environment& env);

}  // namespace hv
