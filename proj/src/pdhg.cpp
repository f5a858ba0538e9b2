#include "pdrank/pdhg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>

#include "pdrank/errors.hpp"
#include "pdrank/prox.hpp"

namespace pdrank {

namespace {

// With tau*sigma*||A||^2 <= 1 the metric
// ||(dx, dv)||_M^2 = ||dx||^2/tau + ||dv||^2/sigma - 2<A dx, dv> is positive
// semidefinite and the PDHG step length in it never grows. A clearly negative
// value, or growth beyond rounding, therefore certifies a violated step bound.
// Growth alone is reported once the cost has also risen above 10x its minimum
// or the step has more than doubled.
constexpr double kCostGrowthFactor = 10.0;
constexpr double kStepGrowthFactor = 2.0;
constexpr double kStepRelativeSlack = 1e-6;
constexpr double kStepRoundingFloor = 1e-9;
constexpr double kIndefiniteSlack = 1e-9;

struct MetricStep {
    double squared = 0.0;  ///< signed value of the quadratic form
    double magnitude = 0.0;  ///< the same terms summed in absolute value
};

MetricStep metric_step(std::span<const double> x, std::span<const double> p, std::span<const double> v,
                       std::span<const double> q, std::span<const SignedRow> rows, double tau,
                       double sigma) {
    double primal = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        primal += (p[k] - x[k]) * (p[k] - x[k]);
    }
    double dual = 0.0;
    double coupling = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) {
        const double dv = q[n] - v[n];
        const double adx = (p[rows[n].plus] - x[rows[n].plus]) - (p[rows[n].minus] - x[rows[n].minus]);
        dual += dv * dv;
        coupling += dv * adx;
    }
    const double diagonal = primal / tau + dual / sigma;
    return {diagonal - 2.0 * coupling, diagonal + 2.0 * std::abs(coupling)};
}

template <typename... Args>
std::string fmt(const char* format, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double metric_scale(std::span<const double> x, std::span<const double> v, double tau, double sigma) {
    double primal = 0.0;
    for (const auto value : x) {
        primal += value * value;
    }
    double dual = 0.0;
    for (const auto value : v) {
        dual += value * value;
    }
    return std::sqrt(primal / tau + dual / sigma);
}

}  // namespace

PdhgConfig::PdhgConfig(double tau, double sigma, double operator_norm, double lambda,
                       double eps_in, int max_iters, int cost_stride, bool record_trace)
    : tau_(tau),
      sigma_(sigma),
      operator_norm_(operator_norm),
      lambda_(lambda),
      eps_in_(eps_in),
      max_iters_(max_iters),
      cost_stride_(cost_stride),
      record_trace_(record_trace) {
    if (!(tau > 0.0) || !(sigma > 0.0)) {
        throw ConfigError("PDHG step sizes must be > 0");
    }
    if (!(operator_norm >= 0.0) || !std::isfinite(operator_norm)) {
        throw ConfigError("PDHG operator norm must be finite and >= 0");
    }
    if (tau * sigma * operator_norm * operator_norm > 1.0) {
        throw ConfigError("PDHG step sizes violate tau*sigma*||A||^2 <= 1 (tau=" +
                          std::to_string(tau) + ", sigma=" + std::to_string(sigma) +
                          ", ||A||=" + std::to_string(operator_norm) + ")");
    }
    if (!(lambda > 0.0 && lambda < 2.0)) {
        throw ConfigError("PDHG relaxation must lie in (0, 2)");
    }
    if (!(eps_in >= 0.0)) {
        throw ConfigError("inner tolerance eps_in must be >= 0");
    }
    if (max_iters < 1 || cost_stride < 1) {
        throw ConfigError("PDHG iteration cap and cost stride must be >= 1");
    }
}

PdhgConfig PdhgConfig::from_operator_norm(double operator_norm, std::size_t num_entries,
                                          const PdhgOptions& options) {
    if (!(options.step_scale > 0.0 && options.step_scale <= 1.0) || !(options.norm_inflation >= 1.0)) {
        throw ConfigError("PDHG needs step_scale in (0, 1] and norm_inflation >= 1");
    }
    const double bound = operator_norm > 0.0 ? options.norm_inflation * operator_norm : 1.0;
    const double step = options.step_scale / bound;
    const int stride = num_entries > options.thin_cost_above ? options.large_cost_stride : 1;
    return {step, step, operator_norm, options.lambda, options.eps_in, options.max_iters, stride,
            options.record_trace};
}

PdhgConfig PdhgConfig::for_dataset(const ComparisonDataset& dataset, const PdhgOptions& options) {
    return from_operator_norm(spectral_norm(dataset), dataset.size(), options);
}

PdhgConfig PdhgConfig::with_eps_in(double eps_in) const {
    return {tau_, sigma_, operator_norm_, lambda_, eps_in, max_iters_, cost_stride_, record_trace_};
}

PdhgConfig PdhgConfig::with_max_iters(int max_iters) const {
    return {tau_, sigma_, operator_norm_, lambda_, eps_in_, max_iters, cost_stride_, record_trace_};
}

double subproblem_cost(std::span<const double> x, const ComparisonDataset& dataset,
                       std::span<const double> omega, double gamma) {
    const auto entries = dataset.entries();
    double data_term = 0.0;
    for (std::size_t n = 0; n < entries.size(); ++n) {
        const double weight = omega[n] * static_cast<double>(entries[n].multiplicity);
        data_term += weight * lse(1.0 - signed_row(entries[n]).dot(x));
    }
    double ridge = 0.0;
    for (const auto value : x) {
        ridge += value * value;
    }
    return data_term + gamma * ridge;
}

std::vector<double> dual_from_primal(std::span<const double> x, const ComparisonDataset& dataset,
                                     std::span<const double> omega) {
    const auto entries = dataset.entries();
    std::vector<double> v(entries.size());
    for (std::size_t n = 0; n < entries.size(); ++n) {
        const double weight = omega[n] * static_cast<double>(entries[n].multiplicity);
        v[n] = -weight * logistic(1.0 - signed_row(entries[n]).dot(x));
    }
    return v;
}

PdhgResult pdhg_solve(const ComparisonDataset& dataset, std::span<const double> omega, double gamma,
                      const PdhgConfig& cfg, std::span<const double> x0,
                      std::optional<std::span<const double>> v0) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const auto elapsed = [&start] {
        return std::chrono::duration<double>(Clock::now() - start).count();
    };

    const auto m = dataset.num_items();
    const auto entries = dataset.entries();
    const auto n_entries = entries.size();
    if (omega.size() != n_entries) {
        throw ConfigError("pdhg_solve: " + std::to_string(omega.size()) + " weights for " +
                          std::to_string(n_entries) + " entries");
    }
    if (gamma < 0.0) {
        throw ConfigError("pdhg_solve: gamma must be >= 0");
    }
    if (!x0.empty() && x0.size() != m) {
        throw ConfigError("pdhg_solve: initial point has wrong length");
    }

    std::vector<double> weights(n_entries);
    for (std::size_t n = 0; n < n_entries; ++n) {
        if (!(omega[n] > 0.0) || !std::isfinite(omega[n])) {
            throw ConfigError("pdhg_solve: weights must be finite and > 0");
        }
        weights[n] = omega[n] * static_cast<double>(entries[n].multiplicity);
    }
    std::vector<SignedRow> rows(n_entries);
    for (std::size_t n = 0; n < n_entries; ++n) {
        rows[n] = signed_row(entries[n]);
    }

    PdhgResult result;
    auto& x = result.x;
    auto& v = result.v;
    if (x0.empty()) {
        x.assign(m, 0.0);
    } else {
        x.assign(x0.begin(), x0.end());
        prox_f_inplace(x, {0.0, 1.0});  // centre only
    }
    if (v0) {
        if (v0->size() != n_entries) {
            throw ConfigError("pdhg_solve: initial dual has wrong length");
        }
        v.assign(v0->begin(), v0->end());
    } else {
        v.assign(n_entries, 0.0);
    }

    const double tau = cfg.tau();
    const double sigma = cfg.sigma();
    const double lambda = cfg.lambda();
    const ProxFParams f_params{gamma, tau};

    std::vector<double> p(m);
    std::vector<double> q(n_entries);
    std::vector<double> atv(m);
    std::vector<double> fractions(n_entries);

    double prev_cost = subproblem_cost(x, dataset, omega, gamma);
    double reference_change = 0.0;
    double min_cost = prev_cost;
    double min_step = std::numeric_limits<double>::infinity();
    bool step_grew = false;
    if (cfg.record_trace()) {
        result.trace.push_back({0, prev_cost, elapsed()});
    }
    result.final_cost = prev_cost;

    for (int it = 1; it <= cfg.max_iters(); ++it) {
        // p = prox_{tau f}(x - tau A^T v)
        std::fill(atv.begin(), atv.end(), 0.0);
        for (std::size_t n = 0; n < n_entries; ++n) {
            atv[rows[n].plus] += v[n];
            atv[rows[n].minus] -= v[n];
        }
        for (std::size_t k = 0; k < m; ++k) {
            p[k] = x[k] - tau * atv[k];
        }
        prox_f_inplace(p, f_params);

        // q = prox_{sigma g*}(v + sigma A (2p - x))
        for (std::size_t n = 0; n < n_entries; ++n) {
            const auto a = rows[n].plus;
            const auto b = rows[n].minus;
            const double az = (2.0 * p[a] - x[a]) - (2.0 * p[b] - x[b]);
            q[n] = v[n] + sigma * az;
            fractions[n] = -v[n] / weights[n];
        }
        prox_g_star_inplace(q, weights, sigma, fractions);

        const auto metric = metric_step(x, p, v, q, rows, tau, sigma);
        if (metric.squared < -kIndefiniteSlack * metric.magnitude) {
            throw DivergenceError(fmt("PDHG step metric is indefinite at iteration %d (%.3g); step sizes "
                                      "violate the convergence bound",
                                      it, metric.squared));
        }
        const double step = std::sqrt(std::max(0.0, metric.squared));
        if (step > (1.0 + kStepRelativeSlack) * min_step &&
            step > kStepRoundingFloor * metric_scale(x, v, tau, sigma)) {
            step_grew = true;
            if (step > kStepGrowthFactor * min_step) {
                throw DivergenceError(fmt("PDHG step length grew from %.3g to %.3g at iteration %d; step "
                                          "sizes violate the convergence bound",
                                          min_step, step, it));
            }
        }
        min_step = std::min(min_step, step);

        if (lambda == 1.0) {
            x.swap(p);
            v.swap(q);
        } else {
            for (std::size_t k = 0; k < m; ++k) {
                x[k] += lambda * (p[k] - x[k]);
            }
            for (std::size_t n = 0; n < n_entries; ++n) {
                v[n] += lambda * (q[n] - v[n]);
            }
        }
        result.iterations = it;

        if (it % cfg.cost_stride() != 0 && it != cfg.max_iters()) {
            continue;
        }
        const double cost = subproblem_cost(x, dataset, omega, gamma);
        if (cfg.record_trace()) {
            result.trace.push_back({it, cost, elapsed()});
        }
        result.final_cost = cost;
        if (!std::isfinite(cost)) {
            throw DivergenceError("PDHG cost became non-finite at iteration " + std::to_string(it));
        }
        if (step_grew && cost > kCostGrowthFactor * min_cost) {
            throw DivergenceError(fmt("PDHG cost %.6g exceeds 10x its minimum %.6g at iteration %d while the "
                                      "step length grows; step sizes violate the convergence bound",
                                      cost, min_cost, it));
        }
        min_cost = std::min(min_cost, cost);
        const double change = std::abs(cost - prev_cost);
        prev_cost = cost;
        if (cfg.eps_in() == 0.0) {
            continue;
        }
        if (change <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(cost) && it > 1) {
            result.converged = true;
            break;
        }
        if (reference_change == 0.0) {
            reference_change = change;
        } else if (change < cfg.eps_in() * reference_change) {
            result.converged = true;
            break;
        }
    }
    return result;
}

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace) {
    out << "iteration,cost,wall_time_s\n";
    out.precision(17);
    for (const auto& t : trace) {
        out << t.iteration << ',' << t.cost << ',' << t.wall_time_s << '\n';
    }
}

}  // namespace pdrank
