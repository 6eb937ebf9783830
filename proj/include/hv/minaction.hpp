#pragma once

#include <cstdint>
#include <vector>

#include "hv/action.hpp"
#include "hv/parallel.hpp"

namespace hv {

struct QuasiPotentialOptions {
    int segments = 200;        // M
    double tol = 1e-6;         // convergence: sup-norm of the interior-point gradient
    int max_iterations = 20000;
    int random_restarts = 3;   // perturbed starts tried after the two deterministic ones
    double margin = 1e-6;      // paths are kept this far inside the open box
    std::uint64_t seed = 1234567;  // stream for the perturbed restarts
    // per-segment duration bounds: tau_max only needs to dwarf the escape
    // time scale (~1/|slow eigenvalue|), and a tight cap keeps the near-z
    // tail segments well conditioned
    double tau_min = 1e-9;
    double tau_max = 1e4;
    int redistribute_every = 25;
};

struct QuasiPotentialResult {
    double value = 0.0;
    TimedPath path;
    bool converged = false;
    double gradient_norm = 0.0;
    int restarts_used = 0;
};

/// V(target) = inf { S_T(phi) : T > 0, phi(0) = z, phi(T) = target }, minimized
/// over the interior points and (positive, log-parameterized) segment durations
/// of a piecewise-linear path. Durations are kept at their per-segment optimum
/// (the zero-energy condition H(midpoint, alpha*) = 0) while the points follow
/// projected Barzilai-Borwein descent; interior points are periodically
/// redistributed to equal arclength so the midpoint quadrature stays sound.
/// Starts: straight line, time-reversed relaxation path, then perturbations.
QuasiPotentialResult quasi_potential(const Point2& target, const ModelParams& params,
                                     const QuasiPotentialOptions& opts = {});

/// Same minimization warm-started from a given path (endpoints are kept).
QuasiPotentialResult quasi_potential_from(const TimedPath& init, const ModelParams& params,
                                          const QuasiPotentialOptions& opts = {});

struct BoundaryProfile {
    std::vector<double> angles;  // 2 pi k / n
    std::vector<double> values;  // V at each sampled boundary point
    std::vector<bool> converged;
    double min_value = 0.0;
    Point2 argmin;
    double argmin_angle = 0.0;
};

struct BoundaryMinOptions {
    int n_points = 64;
    bool warm_start = true;  // sequential pass, each point seeded by its neighbour
    ExecConfig exec;         // used when warm_start is off (independent points)
};

/// V_dD = min of V over n equally spaced points of the circle of given
/// center/radius. Preconditions (validated on the sampled boundary): the disk
/// lies strictly inside the open box and the drift points strictly inward.
BoundaryProfile boundary_min(const Point2& center, double radius,
                             const ModelParams& params,
                             const QuasiPotentialOptions& opts = {},
                             const BoundaryMinOptions& bopts = {});

/// Small-radius estimate of V_dD at q = 1/2: minimum over directions of the
/// local quadratic form (beta - b)^T D^{-1} (beta - b)/2 integrated along the
/// slow eigendirection, which evaluates to radius^2 (1-rho)^2 / rho.
double small_radius_boundary_estimate(const ModelParams& params, double radius);

}  // namespace hv
