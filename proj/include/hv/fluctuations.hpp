#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hv/model.hpp"
#include "hv/simulate.hpp"

namespace hv {

/// Coefficients of the limiting fluctuation SDE around z (q = 1/2):
///   dX = (A (X,Y) + c)_1 dt + sigma dB1,  dY = (A (X,Y) + c)_2 dt + sigma dB2
/// with A = [[-a, b], [b, -a]], a = (1+rho^2)/(2(1+rho)), b = rho/(1+rho),
/// sigma^2 = rho/(2(1+rho)) and quenched forcing c = (H/4, -rho H/4) for the
/// standard-Gaussian environment statistic H (see quenched_H).
struct FluctuationParams {
    double rho = 0.5;
    double h = 0.0;           // quenched Gaussian scalar
    double noise_scale = 1.0; // diagnostic knob; 0 turns the SDE into its ODE part

    double a() const { return (1.0 + rho * rho) / (2.0 * (1.0 + rho)); }
    double b() const { return rho / (1.0 + rho); }
    std::array<double, 4> drift_matrix() const { return {-a(), b(), b(), -a()}; }
    double sigma() const { return std::sqrt(rho / (2.0 * (1.0 + rho))); }
    std::array<double, 2> forcing() const { return {h / 4.0, -rho * h / 4.0}; }
    std::array<double, 2> eigenvalues() const {
        return {-(1.0 - rho) * (1.0 - rho) / (2.0 * (1.0 + rho)), -(1.0 + rho) / 2.0};
    }
};

struct FluctuationSeries {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> y;
    double h = 0.0;
    std::uint64_t seed = 0;
};

struct StationaryMoments {
    std::array<double, 2> mean;     // -A^{-1} c
    std::array<double, 4> cov;      // solves A S + S A^T + sigma^2 I = 0
};

/// Standard-Gaussian statistic of the environment: 2 sqrt(N) (q_N - 1/2).
/// Requires q = 1/2.
double quenched_h(const Environment& env, const ModelParams& params);

/// Euler-Maruyama with independent Gaussian increments per coordinate.
/// Stability guard: step * |largest eigenvalue of A| < 0.5.
FluctuationSeries integrate_sde(const std::array<double, 2>& x0,
                                const FluctuationParams& fp, double horizon,
                                double step, std::uint64_t seed);

/// Closed-form stationary mean and covariance; for this symmetric A the
/// Lyapunov solution is S = -(sigma^2/2) A^{-1}. rho in (0,1) required.
StationaryMoments stationary_moments(const FluctuationParams& fp);

/// sqrt(N) ((m+, m-)(t) - z) sampled on the uniform grid of a grid-recorded
/// path, paired with quenched_h(env). Errors if the path was absorbed before
/// the window end.
FluctuationSeries empirical_fluctuations(const SampledPath& path,
                                         const ModelParams& params,
                                         const Environment& env);

}  // namespace hv
