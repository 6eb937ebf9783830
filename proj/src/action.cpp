#include "hv/action.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LdRates ld_rates(const Point2& x, const ModelParams& params) {
    const double m = x.m_plus + x.m_minus;
    return {(params.q - x.m_plus) * m, params.rho * x.m_plus * (1.0 - m),
            params.rho * (1.0 - params.q - x.m_minus) * m, x.m_minus * (1.0 - m)};
}

double hamiltonian(const Point2& x, const Vec2& alpha, const ModelParams& params) {
    if (std::abs(alpha[0]) > 700.0 || std::abs(alpha[1]) > 700.0)
        throw std::invalid_argument("hamiltonian: |alpha_i| <= 700 required");
    const LdRates r = ld_rates(x, params);
    return r.r1 * std::expm1(alpha[0]) + r.l1 * std::expm1(-alpha[0]) +
           r.r2 * std::expm1(alpha[1]) + r.l2 * std::expm1(-alpha[1]);
}

double lagrangian_1d(double l, double r, double beta) {
    if (l == 0.0 && r == 0.0) return beta == 0.0 ? 0.0 : kInf;
    if (l == 0.0) {
        if (beta < 0.0) return kInf;
        if (beta == 0.0) return r;
        return beta * std::log(beta / r) - beta + r;
    }
    if (r == 0.0) {
        if (beta > 0.0) return kInf;
        if (beta == 0.0) return l;
        return -beta * std::log(-beta / l) + beta + l;
    }
    const double s = std::sqrt(beta * beta + 4.0 * r * l);
    // log((beta+s)/(2r)) without cancellation for beta < 0
    const double alpha = beta >= 0.0 ? std::log((beta + s) / (2.0 * r))
                                     : std::log(2.0 * l / (s - beta));
    return beta * alpha - s + l + r;
}

double lagrangian(const Point2& x, const Vec2& beta, const ModelParams& params) {
    const LdRates r = ld_rates(x, params);
    const double a = lagrangian_1d(r.l1, r.r1, beta[0]);
    if (a == kInf) return kInf;
    const double b = lagrangian_1d(r.l2, r.r2, beta[1]);
    if (b == kInf) return kInf;
    return a + b;
}

Lagrangian1dDerivs lagrangian_1d_derivs(double l, double r, double beta) {
    const double s = std::sqrt(beta * beta + 4.0 * r * l);
    const double alpha = beta >= 0.0 ? std::log((beta + s) / (2.0 * r))
                                     : std::log(2.0 * l / (s - beta));
    const double ea = 0.5 * (beta + s) / r;   // e^{alpha}
    const double eia = 0.5 * (s - beta) / l;  // e^{-alpha}
    return {beta * alpha - s + l + r, alpha, -(eia - 1.0), -(ea - 1.0)};
}

double TimedPath::total_time() const {
    double t = 0.0;
    for (double d : durations) t += d;
    return t;
}

void TimedPath::validate(const ModelParams& params) const {
    if (points.size() != durations.size() + 1 || durations.empty())
        throw std::invalid_argument("path: need M+1 points and M durations");
    for (double d : durations)
        if (!(d > 0.0)) throw std::invalid_argument("path: durations must be > 0");
    for (const Point2& p : points) {
        const bool in_box = p.m_plus >= -1e-12 && p.m_plus <= params.q + 1e-12 &&
                            p.m_minus >= -1e-12 && p.m_minus <= 1.0 - params.q + 1e-12;
        if (!in_box) throw std::invalid_argument("path: point outside the closed box");
    }
}

double path_action(const TimedPath& path, const ModelParams& params) {
    path.validate(params);
    double total = 0.0;
    for (std::size_t i = 0; i < path.segments(); ++i) {
        const Point2& a = path.points[i];
        const Point2& b = path.points[i + 1];
        const double tau = path.durations[i];
        const Point2 mid{0.5 * (a.m_plus + b.m_plus), 0.5 * (a.m_minus + b.m_minus)};
        const Vec2 beta{(b.m_plus - a.m_plus) / tau, (b.m_minus - a.m_minus) / tau};
        const double cost = lagrangian(mid, beta, params);
        if (cost == kInf) return kInf;
        total += tau * cost;
    }
    return total;
}

ActionGradient path_action_gradient(const TimedPath& path, const ModelParams& params) {
    const std::size_t m = path.segments();
    ActionGradient out;
    out.d_points.assign(m + 1, Vec2{0.0, 0.0});
    out.d_theta.assign(m, 0.0);

    for (std::size_t i = 0; i < m; ++i) {
        const Point2& a = path.points[i];
        const Point2& b = path.points[i + 1];
        const double tau = path.durations[i];
        const Point2 c{0.5 * (a.m_plus + b.m_plus), 0.5 * (a.m_minus + b.m_minus)};
        const Vec2 beta{(b.m_plus - a.m_plus) / tau, (b.m_minus - a.m_minus) / tau};
        const LdRates rates = ld_rates(c, params);
        if (!(rates.r1 > 0.0 && rates.l1 > 0.0 && rates.r2 > 0.0 && rates.l2 > 0.0))
            throw std::invalid_argument(
                "path_action_gradient: segment midpoint on the box boundary");

        const Lagrangian1dDerivs d1 = lagrangian_1d_derivs(rates.l1, rates.r1, beta[0]);
        const Lagrangian1dDerivs d2 = lagrangian_1d_derivs(rates.l2, rates.r2, beta[1]);
        const double cost = d1.value + d2.value;
        out.value += tau * cost;

        // rate derivatives w.r.t. (x, y) at the midpoint
        const double x = c.m_plus, y = c.m_minus, mm = x + y, rho = params.rho,
                     q = params.q;
        const Vec2 dr1{-mm + (q - x), q - x};
        const Vec2 dl1{rho * (1.0 - mm) - rho * x, -rho * x};
        const Vec2 dr2{rho * (1.0 - q - y), -rho * mm + rho * (1.0 - q - y)};
        const Vec2 dl2{-y, (1.0 - mm) - y};
        const Vec2 grad_x{
            d1.dr * dr1[0] + d1.dl * dl1[0] + d2.dr * dr2[0] + d2.dl * dl2[0],
            d1.dr * dr1[1] + d1.dl * dl1[1] + d2.dr * dr2[1] + d2.dl * dl2[1]};

        const Vec2 alpha{d1.alpha, d2.alpha};
        for (int k = 0; k < 2; ++k) {
            out.d_points[i][k] += 0.5 * tau * grad_x[k] - alpha[k];
            out.d_points[i + 1][k] += 0.5 * tau * grad_x[k] + alpha[k];
        }
        // d/dtheta = tau (L - <beta, alpha>) = -tau H(c, alpha*)
        out.d_theta[i] = tau * (cost - beta[0] * alpha[0] - beta[1] * alpha[1]);
    }
    return out;
}

}  // namespace hv
