#include "hv/mean_field.hpp"

#include <cmath>
#include <stdexcept>

namespace hv {

namespace {

double box_violation(const Point2& p, const ModelParams& params) {
    double v = 0.0;
    v = std::max(v, -p.m_plus);
    v = std::max(v, p.m_plus - params.q);
    v = std::max(v, -p.m_minus);
    v = std::max(v, p.m_minus - (1.0 - params.q));
    v = std::max(v, p.m_plus + p.m_minus - 1.0);
    return v;
}

Point2 rk4_step(const Point2& p, double h, const ModelParams& params) {
    const Point2 k1 = drift(p, params);
    const Point2 p2{p.m_plus + 0.5 * h * k1.m_plus, p.m_minus + 0.5 * h * k1.m_minus};
    const Point2 k2 = drift(p2, params);
    const Point2 p3{p.m_plus + 0.5 * h * k2.m_plus, p.m_minus + 0.5 * h * k2.m_minus};
    const Point2 k3 = drift(p3, params);
    const Point2 p4{p.m_plus + h * k3.m_plus, p.m_minus + h * k3.m_minus};
    const Point2 k4 = drift(p4, params);
    return {p.m_plus + h / 6.0 * (k1.m_plus + 2 * k2.m_plus + 2 * k3.m_plus + k4.m_plus),
            p.m_minus + h / 6.0 * (k1.m_minus + 2 * k2.m_minus + 2 * k3.m_minus + k4.m_minus)};
}

}  // namespace

Point2 drift(const Point2& x, const ModelParams& params) {
    const double m = x.m_plus + x.m_minus;
    const double r1 = (params.q - x.m_plus) * m;
    const double l1 = params.rho * x.m_plus * (1.0 - m);
    const double r2 = params.rho * (1.0 - params.q - x.m_minus) * m;
    const double l2 = x.m_minus * (1.0 - m);
    return {r1 - l1, r2 - l2};
}

std::array<double, 4> drift_jacobian(const Point2& x, const ModelParams& params) {
    const double u = x.m_plus, v = x.m_minus, m = u + v, rho = params.rho, q = params.q;
    return {
        -rho * (1.0 - m) + rho * u + q - u - m,  // d(drift+)/du
        rho * u + (q - u),                        // d(drift+)/dv
        v + rho * (1.0 - q - v),                  // d(drift-)/du
        -(1.0 - m) + v - rho * m + rho * (1.0 - q - v),
    };
}

Trajectory integrate_ode(const Point2& x0, const ModelParams& params,
                         double horizon, double step) {
    params.validate();
    if (!(horizon > 0.0) || !(step > 0.0))
        throw std::invalid_argument("integrate_ode: horizon and step must be > 0");
    if (box_violation(x0, params) > 1e-12)
        throw std::invalid_argument("integrate_ode: x0 outside the state box");
    if (!std::isfinite(drift(x0, params).m_plus))
        throw std::invalid_argument("integrate_ode: non-finite drift at x0");

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.points.push_back(x0);
    double t = 0.0;
    Point2 p = x0;
    double h = step;
    while (t < horizon - 1e-15) {
        h = std::min(h, horizon - t);
        Point2 next = rk4_step(p, h, params);
        if (box_violation(next, params) > 1e-9 && h > 1e-12) {
            h *= 0.5;  // retry; polynomial field, the box is forward-invariant
            continue;
        }
        p = next;
        t += h;
        traj.times.push_back(t);
        traj.points.push_back(p);
        h = step;
    }
    return traj;
}

Point2 flow_endpoint(const Point2& x0, const ModelParams& params,
                     double horizon, double step) {
    const Trajectory traj = integrate_ode(x0, params, horizon, step);
    return traj.points.back();
}

Point2 interior_equilibrium(const ModelParams& params) {
    if (params.rho >= 1.0)
        throw std::invalid_argument("interior_equilibrium: rho = 1 is degenerate");
    const double w = (params.q * (1.0 + params.rho) - params.rho) /
                     ((1.0 + params.rho) * (1.0 - params.rho));
    return {w, params.rho * w};
}

namespace {

std::array<std::complex<double>, 2> eigenvalues_2x2(const std::array<double, 4>& j) {
    const double tr = j[0] + j[3];
    const double det = j[0] * j[3] - j[1] * j[2];
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(tr * tr / 4.0 - det, 0.0));
    return {tr / 2.0 + disc, tr / 2.0 - disc};
}

Equilibrium classify(const Point2& loc, EquilibriumKind kind, const ModelParams& params) {
    Equilibrium e;
    e.location = loc;
    e.kind = kind;
    e.eigenvalues = eigenvalues_2x2(drift_jacobian(loc, params));
    const bool stable = e.eigenvalues[0].real() < -1e-10 && e.eigenvalues[1].real() < -1e-10;
    e.classification = stable ? Stability::stable : Stability::unstable;
    return e;
}

}  // namespace

EquilibriaResult equilibria(const ModelParams& params) {
    params.validate();
    EquilibriaResult result;
    result.admissibility_threshold = (1.0 - params.q) / params.q;
    if (params.rho >= 1.0) {
        result.degenerate = true;  // m+ + m- is conserved: a line of equilibria
        return result;
    }
    result.equilibria.push_back(
        classify({params.q, 1.0 - params.q}, EquilibriumKind::all_ones, params));
    result.equilibria.push_back(classify({0.0, 0.0}, EquilibriumKind::all_zeros, params));
    if (params.rho < result.admissibility_threshold) {
        result.equilibria.push_back(
            classify(interior_equilibrium(params), EquilibriumKind::interior, params));
    }
    return result;
}

}  // namespace hv
