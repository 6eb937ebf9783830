#include "hv/minaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hv/rng.hpp"

namespace hv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dist(const Point2& a, const Point2& b) {
    return std::hypot(a.m_plus - b.m_plus, a.m_minus - b.m_minus);
}

Point2 clamp_to_box(const Point2& p, const ModelParams& params, double margin) {
    return {std::clamp(p.m_plus, margin, params.q - margin),
            std::clamp(p.m_minus, margin, 1.0 - params.q - margin)};
}

/// Optimal log-duration of one segment: the unique root of
/// g(tau) = sum_i sqrt(beta_i^2 + 4 r_i l_i) - sum_i (r_i + l_i),
/// which is decreasing in tau (zero-energy condition H(mid, alpha*) = 0).
/// Bracketed Newton; returns the clamped optimum when no interior root exists.
double optimal_log_duration(const Point2& mid, const Vec2& displacement,
                            const ModelParams& params, double theta_warm,
                            double theta_min, double theta_max) {
    const LdRates rates = ld_rates(mid, params);
    const double rl_sum = rates.r1 + rates.l1 + rates.r2 + rates.l2;
    const double rl1 = 4.0 * rates.r1 * rates.l1;
    const double rl2 = 4.0 * rates.r2 * rates.l2;
    const double d0 = displacement[0], d1 = displacement[1];

    auto g_and_slope = [&](double theta, double& slope) {
        const double inv_tau = std::exp(-theta);
        const double b0 = d0 * inv_tau, b1 = d1 * inv_tau;
        const double s0 = std::sqrt(b0 * b0 + rl1), s1 = std::sqrt(b1 * b1 + rl2);
        slope = -(b0 * b0 / s0 + b1 * b1 / s1);
        return s0 + s1 - rl_sum;
    };

    double slope;
    if (g_and_slope(theta_min, slope) <= 0.0) return theta_min;
    if (g_and_slope(theta_max, slope) >= 0.0) return theta_max;

    double lo = theta_min, hi = theta_max;
    double theta = std::clamp(theta_warm, lo, hi);
    for (int it = 0; it < 100; ++it) {
        const double g = g_and_slope(theta, slope);
        if (std::abs(g) <= 1e-15 * rl_sum) break;
        if (g > 0.0) lo = theta; else hi = theta;
        double next = slope != 0.0 ? theta - g / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - theta) < 1e-15) { theta = next; break; }
        theta = next;
    }
    return theta;
}

class PathOptimizer {
  public:
    PathOptimizer(const TimedPath& init, const ModelParams& params,
                  const QuasiPotentialOptions& opts)
        : params_(params), opts_(opts), path_(init) {
        for (auto& p : path_.points) p = clamp_to_box(p, params_, opts_.margin);
        path_.points.front() = init.points.front();
        path_.points.back() = init.points.back();
        // endpoints still need to sit where rates are positive
        path_.points.front() = clamp_to_box(path_.points.front(), params_, opts_.margin);
        path_.points.back() = clamp_to_box(path_.points.back(), params_, opts_.margin);
    }

    QuasiPotentialResult run() {
        const std::size_t m = path_.segments();
        const std::size_t nvar = 2 * (m - 1);
        std::vector<double> x(nvar), x_prev(nvar), g(nvar), d(nvar), d_prev(nvar), h(nvar);
        flatten(x);

        // the Hessian w.r.t. a point scales like 1/tau of its segments, which
        // spans many decades along the path; descend on the duration-scaled
        // gradient instead of the raw one
        auto refresh = [&](ActionGradient& ag, double& f, double& gnorm) {
            solve_durations();
            ag = path_action_gradient(path_, params_);
            interior_gradient(ag, g);
            f = ag.value;
            gnorm = sup_norm(g);
            for (std::size_t j = 1; j < m; ++j) {
                const double inv = 1.0 / path_.durations[j - 1] + 1.0 / path_.durations[j];
                const double scale = std::clamp(1.0 / inv, 1e-8, 1e4);
                d[2 * (j - 1)] = scale * g[2 * (j - 1)];
                d[2 * (j - 1) + 1] = scale * g[2 * (j - 1) + 1];
            }
        };

        ActionGradient ag;
        double f = 0.0, gnorm = 0.0;
        refresh(ag, f, gnorm);
        double step = 1e-2;
        bool have_prev = false;
        int stalls = 0;

        // nonmonotone (GLL) acceptance window and the best iterate seen
        std::array<double, 8> fhist;
        fhist.fill(f);
        std::size_t fpos = 0;
        double best_f = f;
        TimedPath best_path = path_;
        double best_gnorm = gnorm;

        int it = 0;
        for (; it < opts_.max_iterations && gnorm > opts_.tol; ++it) {
            // redistribution is structural: only rebalance genuinely uneven spacing
            if (opts_.redistribute_every > 0 && it > 0 &&
                it % opts_.redistribute_every == 0 && spacing_imbalance() > 1.5 &&
                redistribute()) {
                refresh(ag, f, gnorm);
                flatten(x);
                have_prev = false;  // BB memory isn't valid across redistribution
                fhist.fill(f);
                if (gnorm <= opts_.tol) break;
            }
            if (have_prev) {
                double ss = 0.0, sy = 0.0;
                for (std::size_t k = 0; k < nvar; ++k) {
                    const double s = x[k] - x_prev[k];
                    ss += s * s;
                    sy += s * (d[k] - d_prev[k]);
                }
                if (sy > 1e-300) step = std::clamp(ss / sy, 1e-12, 1e6);
            }
            x_prev = x;
            d_prev = d;
            double dg = 0.0;
            for (std::size_t k = 0; k < nvar; ++k) dg += d[k] * g[k];
            const double f_ref = *std::max_element(fhist.begin(), fhist.end());
            bool accepted = false;
            for (int bt = 0; bt < 50; ++bt) {
                for (std::size_t k = 0; k < nvar; ++k) x[k] = x_prev[k] - step * d_prev[k];
                unflatten(x);
                project();
                flatten(x);
                refresh(ag, f, gnorm);
                if (f <= f_ref - 1e-4 * step * dg + 1e-15 * std::abs(f_ref)) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                x = x_prev;
                unflatten(x);
                refresh(ag, f, gnorm);
                if (++stalls > 3) break;  // numerical floor
                step = 1e-6;
                have_prev = false;
                fhist.fill(f);
                continue;
            }
            fhist[fpos] = f;
            fpos = (fpos + 1) % fhist.size();
            if (f < best_f) {
                best_f = f;
                best_path = path_;
                best_gnorm = gnorm;
            }
            have_prev = true;
        }

        if (f > best_f) {  // a nonmonotone run can end above its best iterate
            path_ = best_path;
            refresh(ag, f, gnorm);
            if (gnorm > best_gnorm) gnorm = best_gnorm;
        }

        QuasiPotentialResult res;
        res.value = f;
        res.path = path_;
        res.gradient_norm = gnorm;
        res.converged = gnorm <= opts_.tol;
        return res;
    }

  private:
    void flatten(std::vector<double>& x) const {
        for (std::size_t j = 1; j < path_.points.size() - 1; ++j) {
            x[2 * (j - 1)] = path_.points[j].m_plus;
            x[2 * (j - 1) + 1] = path_.points[j].m_minus;
        }
    }
    void unflatten(const std::vector<double>& x) {
        for (std::size_t j = 1; j < path_.points.size() - 1; ++j) {
            path_.points[j].m_plus = x[2 * (j - 1)];
            path_.points[j].m_minus = x[2 * (j - 1) + 1];
        }
    }
    void project() {
        for (std::size_t j = 1; j < path_.points.size() - 1; ++j)
            path_.points[j] = clamp_to_box(path_.points[j], params_, opts_.margin);
    }
    void interior_gradient(const ActionGradient& ag, std::vector<double>& g) const {
        for (std::size_t j = 1; j < path_.points.size() - 1; ++j) {
            g[2 * (j - 1)] = ag.d_points[j][0];
            g[2 * (j - 1) + 1] = ag.d_points[j][1];
        }
        // projected gradient: directions blocked by the box do not count
        for (std::size_t j = 1; j < path_.points.size() - 1; ++j) {
            const Point2& p = path_.points[j];
            double* gx = &g[2 * (j - 1)];
            if (p.m_plus <= opts_.margin && gx[0] > 0.0) gx[0] = 0.0;
            if (p.m_plus >= params_.q - opts_.margin && gx[0] < 0.0) gx[0] = 0.0;
            if (p.m_minus <= opts_.margin && gx[1] > 0.0) gx[1] = 0.0;
            if (p.m_minus >= 1.0 - params_.q - opts_.margin && gx[1] < 0.0) gx[1] = 0.0;
        }
    }
    static double sup_norm(const std::vector<double>& v) {
        double m = 0.0;
        for (double t : v) m = std::max(m, std::abs(t));
        return m;
    }

    void solve_durations() {
        const double th_min = std::log(opts_.tau_min), th_max = std::log(opts_.tau_max);
        for (std::size_t i = 0; i < path_.segments(); ++i) {
            const Point2& a = path_.points[i];
            const Point2& b = path_.points[i + 1];
            const Point2 mid{0.5 * (a.m_plus + b.m_plus), 0.5 * (a.m_minus + b.m_minus)};
            const Vec2 d{b.m_plus - a.m_plus, b.m_minus - a.m_minus};
            const double theta = optimal_log_duration(mid, d, params_, std::log(path_.durations[i]),
                                                      th_min, th_max);
            path_.durations[i] = std::exp(theta);
        }
    }

    // largest segment length relative to the even-spacing length
    double spacing_imbalance() const {
        const std::size_t m = path_.segments();
        double total = 0.0, longest = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double len = dist(path_.points[i], path_.points[i + 1]);
            total += len;
            longest = std::max(longest, len);
        }
        if (total < 1e-12) return 1.0;
        return longest * static_cast<double>(m) / total;
    }

    // move interior points to equal arclength along the current polyline;
    // returns false when the polyline is too short to resample
    bool redistribute() {
        const std::size_t m = path_.segments();
        std::vector<double> cum(m + 1, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            cum[i + 1] = cum[i] + dist(path_.points[i], path_.points[i + 1]);
        const double total = cum[m];
        if (total < 1e-12) return false;
        std::vector<Point2> fresh(m + 1);
        fresh.front() = path_.points.front();
        fresh.back() = path_.points.back();
        std::size_t seg = 0;
        for (std::size_t j = 1; j < m; ++j) {
            const double s = total * static_cast<double>(j) / static_cast<double>(m);
            while (seg < m - 1 && cum[seg + 1] < s) ++seg;
            const double span = cum[seg + 1] - cum[seg];
            const double w = span > 0.0 ? (s - cum[seg]) / span : 0.0;
            fresh[j] = {path_.points[seg].m_plus +
                            w * (path_.points[seg + 1].m_plus - path_.points[seg].m_plus),
                        path_.points[seg].m_minus +
                            w * (path_.points[seg + 1].m_minus - path_.points[seg].m_minus)};
        }
        path_.points = std::move(fresh);
        return true;
    }

    const ModelParams& params_;
    const QuasiPotentialOptions& opts_;
    TimedPath path_;
};

TimedPath straight_line_path(const Point2& from, const Point2& to, int segments) {
    TimedPath p;
    p.points.resize(static_cast<std::size_t>(segments) + 1);
    p.durations.assign(static_cast<std::size_t>(segments), 1.0);
    for (int j = 0; j <= segments; ++j) {
        const double w = static_cast<double>(j) / segments;
        p.points[static_cast<std::size_t>(j)] = {from.m_plus + w * (to.m_plus - from.m_plus),
                                                 from.m_minus + w * (to.m_minus - from.m_minus)};
    }
    return p;
}

/// Relaxation path from the target toward z, reversed and resampled to
/// equal arclength: the natural first guess for an escape path.
TimedPath reversed_flow_path(const Point2& z, const Point2& target,
                             const ModelParams& params, int segments) {
    const Trajectory traj = integrate_ode(target, params, 200.0, 0.05);
    std::vector<Point2> poly;
    poly.push_back(z);
    for (std::size_t i = traj.points.size(); i-- > 0;) {
        if (dist(traj.points[i], z) > 1e-4) poly.push_back(traj.points[i]);
    }
    poly.push_back(target);

    std::vector<double> cum(poly.size(), 0.0);
    for (std::size_t i = 0; i + 1 < poly.size(); ++i)
        cum[i + 1] = cum[i] + dist(poly[i], poly[i + 1]);
    const double total = cum.back();
    if (total < 1e-12) return straight_line_path(z, target, segments);

    TimedPath p;
    p.points.resize(static_cast<std::size_t>(segments) + 1);
    p.durations.assign(static_cast<std::size_t>(segments), 1.0);
    p.points.front() = z;
    p.points.back() = target;
    std::size_t seg = 0;
    for (int j = 1; j < segments; ++j) {
        const double s = total * static_cast<double>(j) / segments;
        while (seg + 2 < poly.size() && cum[seg + 1] < s) ++seg;
        const double span = cum[seg + 1] - cum[seg];
        const double w = span > 0.0 ? (s - cum[seg]) / span : 0.0;
        p.points[static_cast<std::size_t>(j)] = {
            poly[seg].m_plus + w * (poly[seg + 1].m_plus - poly[seg].m_plus),
            poly[seg].m_minus + w * (poly[seg + 1].m_minus - poly[seg].m_minus)};
    }
    return p;
}

}  // namespace

QuasiPotentialResult quasi_potential_from(const TimedPath& init, const ModelParams& params,
                                          const QuasiPotentialOptions& opts) {
    PathOptimizer opt(init, params, opts);
    QuasiPotentialResult res = opt.run();
    res.restarts_used = 1;
    return res;
}

QuasiPotentialResult quasi_potential(const Point2& target, const ModelParams& params,
                                     const QuasiPotentialOptions& opts) {
    params.validate();
    if (params.rho >= 1.0)
        throw std::invalid_argument("quasi_potential: rho < 1 required");
    if (!(target.m_plus >= 0.0 && target.m_plus <= params.q && target.m_minus >= 0.0 &&
          target.m_minus <= 1.0 - params.q))
        throw std::invalid_argument("quasi_potential: target outside the box");
    const Point2 z = interior_equilibrium(params);

    if (dist(target, z) < 1e-12) {
        QuasiPotentialResult res;
        res.path = straight_line_path(z, z, opts.segments);
        res.converged = true;
        res.restarts_used = 0;
        return res;
    }

    QuasiPotentialResult best;
    best.value = kInf;
    int used = 0;
    auto consider = [&](const TimedPath& init) {
        QuasiPotentialResult r = quasi_potential_from(init, params, opts);
        ++used;
        if (r.value < best.value || (r.converged && !best.converged &&
                                     r.value < best.value + 1e-10)) {
            best = r;
        }
    };

    consider(straight_line_path(z, target, opts.segments));
    consider(reversed_flow_path(z, target, params, opts.segments));

    Rng rng(opts.seed);
    for (int k = 0; k < opts.random_restarts && !best.converged; ++k) {
        TimedPath init = best.path;
        const double amp = 0.15 * dist(target, z);
        const double a1 = amp * rng.normal(), a2 = amp * rng.normal();
        for (std::size_t j = 1; j < init.points.size() - 1; ++j) {
            const double bump = std::sin(M_PI * static_cast<double>(j) /
                                         static_cast<double>(init.points.size() - 1));
            init.points[j].m_plus += a1 * bump;
            init.points[j].m_minus += a2 * bump;
        }
        consider(init);
    }
    best.restarts_used = used;
    return best;
}

BoundaryProfile boundary_min(const Point2& center, double radius,
                             const ModelParams& params,
                             const QuasiPotentialOptions& opts,
                             const BoundaryMinOptions& bopts) {
    params.validate();
    if (bopts.n_points < 4)
        throw std::invalid_argument("boundary_min: need at least 4 boundary points");
    if (!(radius > 0.0) ||
        center.m_plus - radius <= opts.margin ||
        center.m_plus + radius >= params.q - opts.margin ||
        center.m_minus - radius <= opts.margin ||
        center.m_minus + radius >= 1.0 - params.q - opts.margin)
        throw std::invalid_argument("boundary_min: disk must lie strictly inside the open box");

    const int n = bopts.n_points;
    std::vector<Point2> targets(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double ang = 2.0 * M_PI * k / n;
        targets[static_cast<std::size_t>(k)] = {center.m_plus + radius * std::cos(ang),
                                                center.m_minus + radius * std::sin(ang)};
        const Point2 b = drift(targets[static_cast<std::size_t>(k)], params);
        const double outward = b.m_plus * radius * std::cos(ang) + b.m_minus * radius * std::sin(ang);
        if (outward >= 0.0) {
            std::ostringstream msg;
            msg << "boundary_min: drift not inward at boundary point (angle " << ang
                << ", m+ " << targets[static_cast<std::size_t>(k)].m_plus << ", m- "
                << targets[static_cast<std::size_t>(k)].m_minus << ")";
            throw std::invalid_argument(msg.str());
        }
    }

    BoundaryProfile profile;
    profile.angles.resize(static_cast<std::size_t>(n));
    profile.values.resize(static_cast<std::size_t>(n));
    profile.converged.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        profile.angles[static_cast<std::size_t>(k)] = 2.0 * M_PI * k / n;

    std::vector<QuasiPotentialResult> results(static_cast<std::size_t>(n));
    if (bopts.warm_start) {
        for (int k = 0; k < n; ++k) {
            const auto idx = static_cast<std::size_t>(k);
            QuasiPotentialResult r = quasi_potential(targets[idx], params, opts);
            if (k > 0) {
                // retarget the neighbour's minimizer and keep the better one
                TimedPath warm = results[idx - 1].path;
                warm.points.back() = targets[idx];
                QuasiPotentialResult w = quasi_potential_from(warm, params, opts);
                if (w.value < r.value) {
                    w.restarts_used += r.restarts_used;
                    r = w;
                }
            }
            results[idx] = std::move(r);
        }
    } else {
        parallel_for(n, bopts.exec, [&](std::int64_t k) {
            results[static_cast<std::size_t>(k)] =
                quasi_potential(targets[static_cast<std::size_t>(k)], params, opts);
        });
    }

    profile.min_value = kInf;
    for (int k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        profile.values[idx] = results[idx].value;
        profile.converged[idx] = results[idx].converged;
        if (results[idx].value < profile.min_value) {
            profile.min_value = results[idx].value;
            profile.argmin = targets[idx];
            profile.argmin_angle = profile.angles[idx];
        }
    }
    return profile;
}

double small_radius_boundary_estimate(const ModelParams& params, double radius) {
    if (params.q != 0.5)
        throw std::invalid_argument("small_radius_boundary_estimate: q = 1/2 only");
    if (params.rho <= 0.0 || params.rho >= 1.0)
        throw std::invalid_argument("small_radius_boundary_estimate: rho in (0,1) required");
    return radius * radius * (1.0 - params.rho) * (1.0 - params.rho) / params.rho;
}

}  // namespace hv
