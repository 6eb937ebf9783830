#include "hv/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hv {

void ModelParams::validate() const {
    if (n < 1) throw std::invalid_argument("params: N must be >= 1");
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("params: rho must be in [0,1]");
    if (!(q >= 0.5 && q < 1.0)) throw std::invalid_argument("params: q must be in [1/2, 1)");
}

void Environment::validate() const {
    if (n < 1 || n_plus < 0 || n_plus > n)
        throw std::invalid_argument("environment: need 0 <= n_plus <= N");
}

void AggregateState::validate(const Environment& env) const {
    if (k_plus < 0 || k_plus > env.n_plus || k_minus < 0 || k_minus > env.n_minus())
        throw std::invalid_argument("state: counts out of range for the environment");
}

Environment sample_environment(const ModelParams& params, Rng& rng) {
    params.validate();
    return Environment{rng.binomial(params.n, params.q), params.n};
}

Environment sample_environment(const ModelParams& params) {
    Rng rng(params.seed);
    return sample_environment(params, rng);
}

Environment pinned_environment(const ModelParams& params) {
    params.validate();
    return Environment{static_cast<std::int64_t>(std::llround(params.q * static_cast<double>(params.n))),
                       params.n};
}

RateQuad transition_rates(const AggregateState& state, const Environment& env,
                          const ModelParams& params, bool nominal_q) {
    const double n = static_cast<double>(params.n);
    const double x = static_cast<double>(state.k_plus) / n;
    const double y = static_cast<double>(state.k_minus) / n;
    const double m = x + y;
    const double qn = nominal_q ? params.q : env.q_n();
    const double qp = nominal_q ? 1.0 - params.q
                                : static_cast<double>(env.n_minus()) / n;
    RateQuad r;
    r.r1 = n * (qn - x) * m;
    r.l1 = n * params.rho * x * (1.0 - m);
    r.r2 = n * params.rho * (qp - y) * m;
    r.l2 = n * y * (1.0 - m);
    return r;
}

std::pair<double, double> order_parameters(const AggregateState& state,
                                           const ModelParams& params) {
    const double n = static_cast<double>(params.n);
    return {static_cast<double>(state.k_plus) / n, static_cast<double>(state.k_minus) / n};
}

bool is_absorbing(const AggregateState& state, const Environment& env) {
    const std::int64_t k = state.total();
    return k == 0 || k == env.n;
}

AggregateState nearest_state(double m_plus, double m_minus, const Environment& env) {
    const double n = static_cast<double>(env.n);
    auto clamp = [](std::int64_t v, std::int64_t hi) {
        return v < 0 ? 0 : (v > hi ? hi : v);
    };
    AggregateState best{0, 0};
    double best_d2 = -1.0;
    // scan the 2x2 rounding neighborhood; ties go to larger k_plus/k_minus
    const std::int64_t kp0 = static_cast<std::int64_t>(std::floor(m_plus * n));
    const std::int64_t km0 = static_cast<std::int64_t>(std::floor(m_minus * n));
    for (std::int64_t kp = kp0; kp <= kp0 + 1; ++kp) {
        for (std::int64_t km = km0; km <= km0 + 1; ++km) {
            const AggregateState s{clamp(kp, env.n_plus), clamp(km, env.n_minus())};
            const double dx = static_cast<double>(s.k_plus) / n - m_plus;
            const double dy = static_cast<double>(s.k_minus) / n - m_minus;
            const double d2 = dx * dx + dy * dy;
            const bool better =
                best_d2 < 0.0 || d2 < best_d2 ||
                (d2 == best_d2 &&
                 (s.k_plus > best.k_plus ||
                  (s.k_plus == best.k_plus && s.k_minus > best.k_minus)));
            if (better) {
                best = s;
                best_d2 = d2;
            }
        }
    }
    return best;
}

}  // namespace hv
