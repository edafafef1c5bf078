#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "approxcs/sensing.hpp"
#include "approxcs/vecmath.hpp"

namespace approxcs {

// Solver configuration: minimize over x
//
//   f(x) = 1/2 ||Phi x - y||^2 + lambda * sum_i ((D2 x)_i^2 + eps^2)^(p/2)
//
// by nonlinear conjugate gradient with continuation on (eps, lambda): each
// outer stage runs a truncated CG pass, then divides both by
// continuation_divisor (eps floored at eps_floor, lambda at
// lambda_floor_factor * lambda1), warm-starting from the previous solution.
struct ReconParams {
    double p = 0.9;
    double eps1 = 1.0;
    double lambda1 = 1.0;
    int outer_iters = 50;            // continuation stages
    double rel_decrease_tol = 1e-5;  // outer stop on relative objective decrease
    double grad_tol = 1e-15;         // outer stop on gradient norm
    int cg_budget = 15;              // inner CG iterations per stage
    double continuation_divisor = 4.0;
    double eps_floor = 1e-6;
    double lambda_floor_factor = 1e-4;

    void validate() const {
        if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("ReconParams: p must be in (0,1]");
        if (!(eps1 > 0.0) || !(lambda1 > 0.0))
            throw std::invalid_argument("ReconParams: eps1 and lambda1 must be positive");
        if (outer_iters < 1) throw std::invalid_argument("ReconParams: outer_iters must be >= 1");
        if (!(rel_decrease_tol > 0.0) || !(grad_tol > 0.0))
            throw std::invalid_argument("ReconParams: tolerances must be positive");
        if (cg_budget < 1) throw std::invalid_argument("ReconParams: cg_budget must be >= 1");
        if (!(continuation_divisor > 1.0))
            throw std::invalid_argument("ReconParams: continuation_divisor must be > 1");
        if (!(eps_floor > 0.0) || !(lambda_floor_factor > 0.0))
            throw std::invalid_argument("ReconParams: floors must be positive");
    }
};

struct ReconResult {
    std::vector<double> x_star;
    std::vector<double> objective_history;  // f at the end of each stage; non-increasing
    std::vector<double> eps_history;        // smoothing value used by each stage
    bool converged = false;
    int iterations_used = 0;  // outer stages executed
    bool line_search_failed = false;
};

// out[i] = x[i+2] - 2 x[i+1] + x[i]
inline std::vector<double> second_diff(const std::vector<double>& x) {
    if (x.size() < 3)
        throw std::invalid_argument("second_diff: need at least 3 samples, got " +
                                    std::to_string(x.size()));
    std::vector<double> out(x.size() - 2);
    for (std::size_t i = 0; i + 2 < x.size(); ++i) out[i] = x[i + 2] - 2.0 * x[i + 1] + x[i];
    return out;
}

// sum_i (v_i^2 + eps^2)^(p/2), the smooth surrogate of sum |v_i|^p.
inline double smoothed_lp(const std::vector<double>& v, double p, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("smoothed_lp: eps must be positive");
    double s = 0.0;
    for (double vi : v) s += std::pow(vi * vi + eps * eps, 0.5 * p);
    return s;
}

// Phi x through the sparse index plan.
inline std::vector<double> apply_plan(const SensingPlan& plan, const std::vector<double>& x) {
    if (x.size() != static_cast<std::size_t>(plan.frame_length))
        throw std::invalid_argument("apply_plan: dimension mismatch");
    std::vector<double> y(plan.measurements, 0.0);
    for (int k = 0; k < plan.measurements; ++k)
        for (std::int32_t col : plan.row(k)) y[k] += x[col];
    return y;
}

// Phi^T w as a scatter-add over the plan.
inline std::vector<double> apply_plan_transpose(const SensingPlan& plan,
                                                const std::vector<double>& w) {
    if (w.size() != static_cast<std::size_t>(plan.measurements))
        throw std::invalid_argument("apply_plan_transpose: dimension mismatch");
    std::vector<double> x(plan.frame_length, 0.0);
    for (int k = 0; k < plan.measurements; ++k)
        for (std::int32_t col : plan.row(k)) x[col] += w[k];
    return x;
}

inline double objective(const std::vector<double>& x, const std::vector<double>& y,
                        const SensingPlan& plan, double p, double eps, double lambda) {
    if (y.size() != static_cast<std::size_t>(plan.measurements))
        throw std::invalid_argument("objective: measurement length mismatch");
    const std::vector<double> r = apply_plan(plan, x);
    double data = 0.0;
    for (int k = 0; k < plan.measurements; ++k) {
        const double d = r[k] - y[k];
        data += d * d;
    }
    return 0.5 * data + lambda * smoothed_lp(second_diff(x), p, eps);
}

// Phi^T (Phi x - y) + lambda * p * D2^T ( v .* (v^2 + eps^2)^(p/2 - 1) )
inline std::vector<double> gradient(const std::vector<double>& x, const std::vector<double>& y,
                                    const SensingPlan& plan, double p, double eps, double lambda) {
    if (y.size() != static_cast<std::size_t>(plan.measurements))
        throw std::invalid_argument("gradient: measurement length mismatch");
    std::vector<double> r = apply_plan(plan, x);
    for (int k = 0; k < plan.measurements; ++k) r[k] -= y[k];
    std::vector<double> g = apply_plan_transpose(plan, r);

    const std::vector<double> v = second_diff(x);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double w = lambda * p * v[i] * std::pow(v[i] * v[i] + eps * eps, 0.5 * p - 1.0);
        g[i] += w;
        g[i + 1] -= 2.0 * w;
        g[i + 2] += w;
    }
    return g;
}

inline ReconResult reconstruct(const std::vector<double>& y, const SensingPlan& plan,
                               const ReconParams& prm) {
    prm.validate();
    plan.validate();
    if (y.size() != static_cast<std::size_t>(plan.measurements))
        throw std::invalid_argument("reconstruct: expected " + std::to_string(plan.measurements) +
                                    " measurements, got " + std::to_string(y.size()));
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("reconstruct: non-finite measurement");
    if (plan.frame_length < 3)
        throw std::invalid_argument("reconstruct: frame too short for a second difference");

    const int n = plan.frame_length;
    const double armijo_c = 1e-4;

    std::vector<double> x = apply_plan_transpose(plan, y);
    double eps = prm.eps1;
    double lambda = prm.lambda1;

    ReconResult res;
    double f_prev = std::numeric_limits<double>::infinity();
    double alpha_seed = 1.0;
    std::vector<double> trial(x.size());

    for (int t = 0; t < prm.outer_iters; ++t) {
        res.eps_history.push_back(eps);
        double f = objective(x, y, plan, prm.p, eps, lambda);
        std::vector<double> g = gradient(x, y, plan, prm.p, eps, lambda);
        double gg = dot(g, g);
        std::vector<double> d(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
        int steps_since_restart = 0;
        bool stage_failed = false;

        for (int it = 0; it < prm.cg_budget && !stage_failed; ++it) {
            if (std::sqrt(gg) <= prm.grad_tol) break;
            double slope = dot(g, d);
            if (slope >= 0.0) {  // restart on a non-descent direction
                for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
                slope = -gg;
                steps_since_restart = 0;
            }

            // Armijo backtracking, warm-started from twice the last accepted step
            double alpha = std::clamp(2.0 * alpha_seed, 1e-12, 1e6);
            bool accepted = false;
            double f_new = f;
            for (int halvings = 0; halvings < 64; ++halvings) {
                for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + alpha * d[i];
                f_new = objective(trial, y, plan, prm.p, eps, lambda);
                if (f_new <= f + armijo_c * alpha * slope) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) {  // stage ends; flagged, not fatal
                res.line_search_failed = true;
                stage_failed = true;
                break;
            }
            x.swap(trial);
            alpha_seed = alpha;
            f = f_new;

            std::vector<double> g_new = gradient(x, y, plan, prm.p, eps, lambda);
            const double gg_new = dot(g_new, g_new);
            double beta = 0.0;
            ++steps_since_restart;
            if (steps_since_restart >= n) {
                steps_since_restart = 0;  // periodic restart
            } else {
                double num = gg_new;  // Polak-Ribiere+: g_new . (g_new - g)
                for (std::size_t i = 0; i < g.size(); ++i) num -= g_new[i] * g[i];
                beta = std::max(0.0, num / gg);
            }
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = -g_new[i] + beta * d[i];
            g.swap(g_new);
            gg = gg_new;
        }

        res.objective_history.push_back(f);
        res.iterations_used = t + 1;

        if (std::sqrt(gg) <= prm.grad_tol) {
            res.converged = true;
            break;
        }
        if (f_prev - f < prm.rel_decrease_tol * std::max(1.0, std::abs(f_prev))) {
            res.converged = true;
            break;
        }
        f_prev = f;

        eps = std::max(eps / prm.continuation_divisor, prm.eps_floor);
        lambda = std::max(lambda / prm.continuation_divisor, prm.lambda_floor_factor * prm.lambda1);
    }

    res.x_star = std::move(x);
    return res;
}

} // namespace approxcs
