#pragma once

#include <cstdint>
#include <vector>

#include "hv/model.hpp"
#include "hv/simulate.hpp"

namespace hv {

/// Mean first-passage problem for the exact finite-N chain: absorbing set is
/// either {all-zero, all-one} or the complement of an open disk in the
/// (m+, m-) plane (states strictly inside are transient).
struct FptProblem {
    ModelParams params;
    Environment env;
    StopRule rule;
    AggregateState start;
};

/// Full solution of (-Q u) = 1 on transient states, u = 0 on the absorbing
/// set. States are listed in row-major (k_plus, k_minus) order.
struct FptSolution {
    std::vector<AggregateState> states;
    std::vector<double> mean_times;
    double residual = 0.0;  // max |Qu + 1| over transient states
};

/// Solves the absorbing linear system by sparse direct factorization below
/// 2e5 transient states, BiCGSTAB with diagonal preconditioning above.
/// Deterministic; relative residual <= 1e-9 enforced.
FptSolution solve_mean_times(const FptProblem& problem);

/// Mean time to leave the transient set, started from problem.start
/// (0 when the start is already absorbing).
double mean_exit_time_exact(const FptProblem& problem);

/// Absorption-mode convenience wrapper.
double mean_absorption_time_exact(const ModelParams& params, const Environment& env,
                                  const AggregateState& start);

/// Least-squares fit of log(time) against N; the slope is the finite-size
/// exponent estimate. Residuals are reported so curvature is visible.
struct ScalingFit {
    std::vector<double> n_values;
    std::vector<double> log_mean_times;
    double slope = 0.0;
    double intercept = 0.0;
    double residual_norm = 0.0;  // l2 norm of fit residuals
    double r_squared = 0.0;
};

ScalingFit scaling_fit(const std::vector<std::int64_t>& n_list,
                       const std::vector<double>& times);

}  // namespace hv
