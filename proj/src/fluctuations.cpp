#include "hv/fluctuations.hpp"

#include <cmath>
#include <stdexcept>

#include "hv/mean_field.hpp"

namespace hv {

double quenched_h(const Environment& env, const ModelParams& params) {
    params.validate();
    env.validate();
    if (params.q != 0.5)
        throw std::invalid_argument("quenched_h: defined for q = 1/2");
    const double n = static_cast<double>(env.n);
    return 2.0 * std::sqrt(n) * (env.q_n() - 0.5);
}

FluctuationSeries integrate_sde(const std::array<double, 2>& x0,
                                const FluctuationParams& fp, double horizon,
                                double step, std::uint64_t seed) {
    if (!(step > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("integrate_sde: step and horizon must be > 0");
    const double lam_max = (1.0 + fp.rho) / 2.0;
    if (!(step * lam_max < 0.5))
        throw std::invalid_argument("integrate_sde: step too large for stability, need step * " +
                                    std::to_string(lam_max) + " < 0.5");

    const auto a = fp.drift_matrix();
    const auto c = fp.forcing();
    const double noise = fp.noise_scale * fp.sigma() * std::sqrt(step);

    Rng rng(seed);
    FluctuationSeries out;
    out.h = fp.h;
    out.seed = seed;
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step));
    out.times.reserve(steps + 1);
    out.x.reserve(steps + 1);
    out.y.reserve(steps + 1);
    double x = x0[0], y = x0[1];
    out.times.push_back(0.0);
    out.x.push_back(x);
    out.y.push_back(y);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double dx = (a[0] * x + a[1] * y + c[0]) * step + noise * rng.normal();
        const double dy = (a[2] * x + a[3] * y + c[1]) * step + noise * rng.normal();
        x += dx;
        y += dy;
        out.times.push_back(static_cast<double>(i) * step);
        out.x.push_back(x);
        out.y.push_back(y);
    }
    return out;
}

StationaryMoments stationary_moments(const FluctuationParams& fp) {
    if (!(fp.rho > 0.0 && fp.rho < 1.0))
        throw std::invalid_argument("stationary_moments: rho in (0,1) required "
                                    "(A singular or noise degenerate at the endpoints)");
    const double a = fp.a(), b = fp.b();
    const double det = a * a - b * b;
    // A^{-1} = (1/det) [[-a, -b], [-b, -a]]
    const std::array<double, 4> a_inv{-a / det, -b / det, -b / det, -a / det};
    const auto c = fp.forcing();
    StationaryMoments sm;
    sm.mean = {-(a_inv[0] * c[0] + a_inv[1] * c[1]), -(a_inv[2] * c[0] + a_inv[3] * c[1])};
    const double s2 = fp.sigma() * fp.sigma();
    for (int i = 0; i < 4; ++i) sm.cov[static_cast<std::size_t>(i)] = -0.5 * s2 * a_inv[static_cast<std::size_t>(i)];
    return sm;
}

FluctuationSeries empirical_fluctuations(const SampledPath& path,
                                         const ModelParams& params,
                                         const Environment& env) {
    params.validate();
    if (params.q != 0.5)
        throw std::invalid_argument("empirical_fluctuations: defined for q = 1/2");
    if (params.rho >= 1.0 || !(params.rho < (1.0 - params.q) / params.q))
        throw std::invalid_argument("empirical_fluctuations: interior equilibrium required");
    if (path.absorbed && path.absorption_time &&
        *path.absorption_time < path.times.back())
        throw std::invalid_argument("empirical_fluctuations: path absorbed inside the window");
    if (path.times.empty())
        throw std::invalid_argument("empirical_fluctuations: empty path");

    const Point2 z = interior_equilibrium(params);
    const double scale = std::sqrt(static_cast<double>(params.n));
    FluctuationSeries out;
    out.h = quenched_h(env, params);
    out.times = path.times;
    out.x.reserve(path.states.size());
    out.y.reserve(path.states.size());
    for (const AggregateState& s : path.states) {
        const auto [mp, mm] = order_parameters(s, params);
        out.x.push_back(scale * (mp - z.m_plus));
        out.y.push_back(scale * (mm - z.m_minus));
    }
    return out;
}

}  // namespace hv
