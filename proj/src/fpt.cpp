#include "hv/fpt.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

#include "hv/errors.hpp"

namespace hv {

namespace {

bool transient(const FptProblem& p, const AggregateState& s) {
    return !p.rule.stopped(s, p.env, p.params);
}

}  // namespace

FptSolution solve_mean_times(const FptProblem& problem) {
    problem.params.validate();
    problem.env.validate();
    problem.start.validate(problem.env);
    const std::int64_t np = problem.env.n_plus;
    const std::int64_t nm = problem.env.n_minus();
    const std::int64_t grid = (np + 1) * (nm + 1);
    if (grid > 1000000)
        throw std::invalid_argument("solve_mean_times: state space above 1e6");

    // enumerate transient states in row-major order
    std::vector<std::int32_t> index(static_cast<std::size_t>(grid), -1);
    FptSolution sol;
    for (std::int64_t kp = 0; kp <= np; ++kp) {
        for (std::int64_t km = 0; km <= nm; ++km) {
            const AggregateState s{kp, km};
            if (transient(problem, s)) {
                index[static_cast<std::size_t>(kp * (nm + 1) + km)] =
                    static_cast<std::int32_t>(sol.states.size());
                sol.states.push_back(s);
            }
        }
    }
    const auto n = static_cast<std::int64_t>(sol.states.size());
    if (n == 0) {
        sol.mean_times.clear();
        return sol;
    }

    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    trips.reserve(static_cast<std::size_t>(5 * n));
    for (std::int64_t row = 0; row < n; ++row) {
        const AggregateState& s = sol.states[static_cast<std::size_t>(row)];
        const RateQuad r = transition_rates(s, problem.env, problem.params);
        const double total = r.total();
        if (total == 0.0)
            throw numerical_error("solve_mean_times: transient state with zero total rate");
        trips.emplace_back(row, row, -total);
        const std::pair<AggregateState, double> moves[4] = {
            {{s.k_plus + 1, s.k_minus}, r.r1},
            {{s.k_plus - 1, s.k_minus}, r.l1},
            {{s.k_plus, s.k_minus + 1}, r.r2},
            {{s.k_plus, s.k_minus - 1}, r.l2},
        };
        for (const auto& [to, rate] : moves) {
            if (rate <= 0.0) continue;
            const std::int32_t col = index[static_cast<std::size_t>(to.k_plus * (nm + 1) + to.k_minus)];
            if (col >= 0) trips.emplace_back(row, col, rate);
        }
    }

    Eigen::SparseMatrix<double> q(n, n);
    q.setFromTriplets(trips.begin(), trips.end());
    q.makeCompressed();
    const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, -1.0);

    Eigen::VectorXd u;
    if (n <= 200000) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(q);
        if (lu.info() != Eigen::Success)
            throw numerical_error("solve_mean_times: sparse factorization failed (singular system?)");
        u = lu.solve(rhs);
    } else {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> cg;
        cg.setTolerance(1e-12);
        cg.setMaxIterations(20000);
        cg.compute(q);
        u = cg.solve(rhs);
        if (cg.info() != Eigen::Success)
            throw numerical_error("solve_mean_times: iterative solver did not converge, error " +
                                  std::to_string(cg.error()));
    }

    const Eigen::VectorXd resid = q * u - rhs;
    sol.residual = resid.cwiseAbs().maxCoeff();
    if (!(sol.residual <= 1e-9))
        throw numerical_error("solve_mean_times: residual " + std::to_string(sol.residual) +
                              " above 1e-9");

    sol.mean_times.assign(u.data(), u.data() + n);
    return sol;
}

double mean_exit_time_exact(const FptProblem& problem) {
    if (!transient(problem, problem.start)) return 0.0;
    const FptSolution sol = solve_mean_times(problem);
    for (std::size_t row = 0; row < sol.states.size(); ++row) {
        if (sol.states[row] == problem.start) return sol.mean_times[row];
    }
    throw std::logic_error("mean_exit_time_exact: start state not enumerated");
}

double mean_absorption_time_exact(const ModelParams& params, const Environment& env,
                                  const AggregateState& start) {
    FptProblem p;
    p.params = params;
    p.env = env;
    p.rule.kind = StopRule::absorption;
    p.start = start;
    return mean_exit_time_exact(p);
}

ScalingFit scaling_fit(const std::vector<std::int64_t>& n_list,
                       const std::vector<double>& times) {
    if (n_list.size() != times.size())
        throw std::invalid_argument("scaling_fit: N list and times must have equal length");
    if (n_list.size() < 4)
        throw std::invalid_argument("scaling_fit: need at least 4 data points");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("scaling_fit: N list must be increasing");
        if (!(times[i] > 0.0))
            throw std::invalid_argument("scaling_fit: times must be positive");
    }

    ScalingFit fit;
    const auto n = static_cast<double>(n_list.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        fit.n_values.push_back(static_cast<double>(n_list[i]));
        fit.log_mean_times.push_back(std::log(times[i]));
        sx += fit.n_values[i];
        sy += fit.log_mean_times[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const double dx = fit.n_values[i] - mx, dy = fit.log_mean_times[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const double r = fit.log_mean_times[i] - (fit.intercept + fit.slope * fit.n_values[i]);
        ss_res += r * r;
    }
    fit.residual_norm = std::sqrt(ss_res);
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    if (!std::isfinite(fit.slope)) throw numerical_error("scaling_fit: non-finite slope");
    return fit;
}

}  // namespace hv
