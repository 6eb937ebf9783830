#pragma once

#include <array>
#include <complex>
#include <vector>

#include "hv/model.hpp"

namespace hv {

struct Point2 {
    double m_plus = 0.0;
    double m_minus = 0.0;
};

enum class EquilibriumKind { all_ones, all_zeros, interior };
enum class Stability { stable, unstable, non_admissible };

struct Equilibrium {
    Point2 location;
    EquilibriumKind kind;
    std::array<std::complex<double>, 2> eigenvalues;
    Stability classification;
};

struct EquilibriaResult {
    std::vector<Equilibrium> equilibria;
    bool degenerate = false;        // rho = 1: a continuum of equilibria, none reported
    double admissibility_threshold; // interior point exists iff rho < (1-q)/q
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Point2> points;
};

/// Deterministic limit vector field:
///   dm+/dt = -rho m+ (1-m- -m+) + (q-m+)(m+ + m-)
///   dm-/dt = -m- (1-m- -m+) + rho (1-q-m-)(m+ + m-)
/// Written as r_i - l_i with the nominal-q rate expressions, so it agrees
/// with transition_rates/N to the last bit when q_N = q.
Point2 drift(const Point2& x, const ModelParams& params);

/// Analytic Jacobian of the drift, row-major [[du'/du, du'/dv],[dv'/du, dv'/dv]].
std::array<double, 4> drift_jacobian(const Point2& x, const ModelParams& params);

/// Fixed-step RK4 on [0, horizon] recording every accepted step; a step that
/// leaves the box [0,q] x [0,1-q] (or m+ + m- > 1) by more than 1e-9 is
/// retried with the step halved.
Trajectory integrate_ode(const Point2& x0, const ModelParams& params,
                         double horizon, double step);

/// Convenience: final point of the flow started at x0.
Point2 flow_endpoint(const Point2& x0, const ModelParams& params,
                     double horizon, double step);

/// The three closed-form equilibria with eigenvalues and stability; the
/// interior point is included only when rho < (1-q)/q. rho = 1 yields the
/// degenerate flag and no equilibria list.
EquilibriaResult equilibria(const ModelParams& params);

/// Interior equilibrium z = (w, rho w), w = (q(1+rho)-rho)/((1+rho)(1-rho)).
/// Requires rho < 1.
Point2 interior_equilibrium(const ModelParams& params);

}  // namespace hv
