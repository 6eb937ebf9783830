#pragma once

// Independent oracles used by the tests; deliberately implemented without the
// library's solver or optimizer code paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hv/model.hpp"

namespace oracle {

// Mean absorption time of a 1-D birth-death chain on {0..n} with both
// endpoints absorbing, by the Thomas algorithm on the tridiagonal system
// (lam_k + mu_k) u_k - lam_k u_{k+1} - mu_k u_{k-1} = 1.
inline double bd_mean_absorption(const std::vector<double>& lam,
                                 const std::vector<double>& mu,
                                 std::int64_t start) {
    const std::size_t n = lam.size();  // entries for states 1..n-1... see below
    if (mu.size() != n || n < 1) throw std::invalid_argument("bd oracle: bad sizes");
    // states 1..n correspond to indices 0..n-1
    std::vector<double> a(n), b(n), c(n), d(n, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = -mu[k];
        b[k] = lam[k] + mu[k];
        c[k] = -lam[k];
    }
    for (std::size_t k = 1; k < n; ++k) {
        const double w = a[k] / b[k - 1];
        b[k] -= w * c[k - 1];
        d[k] -= w * d[k - 1];
    }
    std::vector<double> u(n);
    u[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) u[k] = (d[k] - c[k] * u[k + 1]) / b[k];
    if (start < 1 || static_cast<std::size_t>(start) > n)
        throw std::invalid_argument("bd oracle: start outside transient states");
    return u[static_cast<std::size_t>(start - 1)];
}

// Voter chain at rho = 1: K moves up/down at rate k(N-k)/N.
inline double voter_mean_absorption(std::int64_t n, std::int64_t start) {
    std::vector<double> lam(static_cast<std::size_t>(n - 1)), mu(static_cast<std::size_t>(n - 1));
    for (std::int64_t k = 1; k < n; ++k) {
        const double rate = static_cast<double>(k) * static_cast<double>(n - k) /
                            static_cast<double>(n);
        lam[static_cast<std::size_t>(k - 1)] = rate;
        mu[static_cast<std::size_t>(k - 1)] = rate;
    }
    return bd_mean_absorption(lam, mu, start);
}

// Exact quasi-potential of the model (q = params.q, nominal rates): the tilt
// field (log(l1/r1), log(l2/r2)) is a gradient, and integrating it gives
//   V(x,y) = x ln x + (q-x) ln(q-x) + y ln y + (1-q-y) ln(1-q-y)
//            - m ln m - (1-m) ln(1-m) + (x-y) ln rho  - (same at z),
// valid on the open box. Zero-entropy limits at the faces.
inline double closed_form_qpot(const hv::ModelParams& params, double x, double y) {
    auto xlx = [](double t) { return t > 0.0 ? t * std::log(t) : 0.0; };
    auto value = [&](double u, double v) {
        const double m = u + v;
        return xlx(u) + xlx(params.q - u) + xlx(v) + xlx(1.0 - params.q - v) - xlx(m) -
               xlx(1.0 - m) + (u - v) * std::log(params.rho);
    };
    const double w = (params.q * (1.0 + params.rho) - params.rho) /
                     ((1.0 + params.rho) * (1.0 - params.rho));
    return value(x, y) - value(w, params.rho * w);
}

// sup_alpha { beta alpha - r(e^alpha - 1) - l(e^{-alpha} - 1) } by golden
// section search (no derivative information).
inline double legendre_sup_1d(double l, double r, double beta, double* arg = nullptr) {
    auto f = [&](double a) { return beta * a - r * std::expm1(a) - l * std::expm1(-a); };
    double lo = -40.0, hi = 40.0;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
        if (hi - lo < 1e-12) break;
    }
    const double a = 0.5 * (lo + hi);
    if (arg) *arg = a;
    return f(a);
}

}  // namespace oracle
