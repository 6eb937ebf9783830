#include "hv/rng.hpp"

#include <stdexcept>

namespace hv {

double Rng::gamma(double shape) {
    if (shape < 1.0) throw std::invalid_argument("gamma: shape must be >= 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::int64_t Rng::binomial(std::int64_t n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0) throw std::invalid_argument("binomial: bad arguments");
    std::int64_t base = 0;
    // Beta-splitting: the k-th order statistic of n uniforms is Beta(k, n+1-k);
    // conditioning on it being above/below p halves the problem.
    while (n > 64) {
        const std::int64_t k = 1 + n / 2;
        const double ga = gamma(static_cast<double>(k));
        const double gb = gamma(static_cast<double>(n + 1 - k));
        const double x = ga / (ga + gb);
        if (x <= p) {
            base += k;
            n -= k;
            p = (p - x) / (1.0 - x);
        } else {
            n = k - 1;
            p = p / x;
        }
        if (p < 0.0) p = 0.0;
        if (p > 1.0) p = 1.0;
    }
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < n; ++i)
        if (uniform() < p) ++count;
    return base + count;
}

}  // namespace hv
