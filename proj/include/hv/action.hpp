#pragma once

#include <array>
#include <vector>

#include "hv/mean_field.hpp"

namespace hv {

using Vec2 = std::array<double, 2>;

/// N-free jump rates of the large-deviation Hamiltonian, nominal q:
/// l1 = rho x (1-x-y), r1 = (q-x)(x+y), l2 = y (1-x-y), r2 = rho (1-q-y)(x+y).
struct LdRates {
    double r1, l1, r2, l2;
};
LdRates ld_rates(const Point2& x, const ModelParams& params);

/// H(x, a) = sum_i r_i (e^{a_i} - 1) + l_i (e^{-a_i} - 1). Requires |a_i| <= 700.
double hamiltonian(const Point2& x, const Vec2& alpha, const ModelParams& params);

/// One-coordinate Legendre transform of the jump Hamiltonian:
///   Ltilde(l, r; b) = b log((b + sqrt(b^2+4rl))/(2r)) - sqrt(b^2+4rl) + l + r
/// with the boundary limits: infinite iff (l = 0 and b < 0) or (r = 0 and b > 0);
/// l = 0, b > 0 gives b log(b/r) - b + r; b = 0 gives r (resp. l); both rates
/// zero gives 0 at b = 0.
double lagrangian_1d(double l, double r, double beta);

/// L(x, beta) = Ltilde(l1, r1; beta1) + Ltilde(l2, r2; beta2); may be +infinity.
double lagrangian(const Point2& x, const Vec2& beta, const ModelParams& params);

/// Piecewise-linear path with per-segment durations.
struct TimedPath {
    std::vector<Point2> points;     // M+1 points
    std::vector<double> durations;  // M positive durations

    std::size_t segments() const { return durations.size(); }
    double total_time() const;
    void validate(const ModelParams& params) const;
};

/// Midpoint-rule action: sum of duration * L(midpoint, displacement/duration).
/// +infinity if any segment cost is infinite.
double path_action(const TimedPath& path, const ModelParams& params);

/// Value and derivatives of one Lagrangian coordinate at an interior point
/// (both rates positive). alpha is the maximizing tilt, which is also dL/dbeta;
/// dl and dr are the envelope derivatives w.r.t. the rates.
struct Lagrangian1dDerivs {
    double value, alpha, dl, dr;
};
Lagrangian1dDerivs lagrangian_1d_derivs(double l, double r, double beta);

/// path_action together with its gradient w.r.t. every point coordinate and
/// every log-duration theta_s = log(duration_s). Requires all segment
/// midpoints strictly inside the box (all four rates positive).
struct ActionGradient {
    double value = 0.0;
    std::vector<Vec2> d_points;    // M+1 entries
    std::vector<double> d_theta;   // M entries; equals -duration * H(mid, alpha*)
};
ActionGradient path_action_gradient(const TimedPath& path, const ModelParams& params);

}  // namespace hv
