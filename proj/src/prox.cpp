#include "pdrank/prox.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pdrank/errors.hpp"
#include "pdrank/random.hpp"

namespace pdrank {

double lse(double t) {
    if (t > 0.0) {
        return t + std::log1p(std::exp(-t));
    }
    return std::log1p(std::exp(t));
}

double logistic(double t) {
    if (t >= 0.0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

void prox_f_inplace(std::span<double> x, const ProxFParams& params) {
    if (x.empty()) {
        return;
    }
    const double scale = 1.0 / (1.0 + 2.0 * params.gamma * params.tau);
    double sum = 0.0;
    for (auto& value : x) {
        if (std::isnan(value)) {
            throw DataError("prox_f: NaN input");
        }
        value *= scale;
        sum += value;
    }
    const double mean = sum / static_cast<double>(x.size());
    for (auto& value : x) {
        value -= mean;
    }
}

std::vector<double> prox_f(std::span<const double> x, const ProxFParams& params) {
    if (params.gamma < 0.0 || !(params.tau > 0.0)) {
        throw ConfigError("prox_f needs gamma >= 0 and tau > 0");
    }
    std::vector<double> out(x.begin(), x.end());
    prox_f_inplace(out, params);
    return out;
}

double scalar_lse_residual(const ScalarProxProblem& problem, double u) {
    return -logistic(1.0 - u) + (u - problem.x_tilde) / problem.w_tilde;
}

ScalarProxSolution scalar_lse_prox(const ScalarProxProblem& problem, double tol,
                                   std::optional<double> start_fraction) {
    const double x = problem.x_tilde;
    const double w = problem.w_tilde;
    if (!(w > 0.0) || !std::isfinite(w) || !std::isfinite(x)) {
        throw ConfigError("scalar prox needs finite x_tilde and w_tilde > 0");
    }
    // Work in t = (u - x)/w, so the root of h(t) = t - s(x + w t) with
    // s(u) = 1/(1 + e^{u-1}) lies in [0, 1]. h is strictly increasing.
    const auto s_at = [x, w](double t) { return logistic(1.0 - (x + w * t)); };

    double lo = 0.0;
    double hi = 1.0;
    // s is decreasing, so s(0) is itself an upper bracket: h(s(0)) >= 0.
    const double s0 = s_at(0.0);
    if (s0 == 0.0) {
        return {x, 0.0, 0.0, 0};
    }
    hi = std::min(hi, s0);
    double t = start_fraction && *start_fraction > lo && *start_fraction < hi ? *start_fraction
                                                                              : 0.5 * (lo + hi);
    double last_step = hi - lo;
    double step = last_step;

    constexpr int kMaxIters = 200;
    for (int it = 1; it <= kMaxIters; ++it) {
        const double s = s_at(t);
        const double h = t - s;
        if (std::abs(h) <= tol) {
            return {x + w * t, t, h, it};
        }
        if (h > 0.0) {
            hi = t;
        } else {
            lo = t;
        }
        if (std::nextafter(lo, hi) >= hi) {
            // root resolved to adjacent doubles
            return {x + w * t, t, h, it};
        }
        const double slope = 1.0 + w * s * (1.0 - s);
        const double newton = t - h / slope;
        // bisect when Newton leaves the bracket or is not at least halving the step
        if (!(newton > lo && newton < hi) || std::abs(2.0 * h) > std::abs(last_step * slope)) {
            last_step = step;
            step = 0.5 * (hi - lo);
            t = lo + step;
        } else {
            last_step = step;
            step = h / slope;
            t = newton;
        }
    }
    throw DivergenceError("scalar prox did not converge for x_tilde=" + std::to_string(x) +
                          ", w_tilde=" + std::to_string(w));
}

void prox_g_star_inplace(std::span<double> v, std::span<const double> weights, double sigma) {
    for (std::size_t n = 0; n < v.size(); ++n) {
        // v - sigma*u with u = v/sigma + (w/sigma) t  simplifies to  -w t
        const auto sol = scalar_lse_prox({v[n] / sigma, weights[n] / sigma});
        v[n] = -weights[n] * sol.fraction;
    }
}

void prox_g_star_inplace(std::span<double> v, std::span<const double> weights, double sigma,
                         std::span<const double> start_fractions) {
    for (std::size_t n = 0; n < v.size(); ++n) {
        const auto sol =
            scalar_lse_prox({v[n] / sigma, weights[n] / sigma}, kScalarProxTol, start_fractions[n]);
        v[n] = -weights[n] * sol.fraction;
    }
}

namespace {

void check_dual_args(std::size_t n, std::span<const double> weights, double sigma) {
    if (!(sigma > 0.0)) {
        throw ConfigError("dual step sigma must be > 0");
    }
    if (weights.size() != n) {
        throw ConfigError("weight vector has " + std::to_string(weights.size()) +
                          " entries, expected " + std::to_string(n));
    }
    for (const auto w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw ConfigError("weights must be finite and > 0");
        }
    }
}

}  // namespace

std::vector<double> prox_g_star(std::span<const double> v, std::span<const double> weights,
                                double sigma) {
    check_dual_args(v.size(), weights, sigma);
    std::vector<double> out(v.begin(), v.end());
    prox_g_star_inplace(out, weights, sigma);
    return out;
}

std::vector<double> prox_g_scaled(std::span<const double> z, std::span<const double> weights,
                                  double sigma) {
    check_dual_args(z.size(), weights, sigma);
    std::vector<double> out(z.size());
    for (std::size_t n = 0; n < z.size(); ++n) {
        out[n] = scalar_lse_prox({z[n], weights[n] / sigma}).u;
    }
    return out;
}

double spectral_norm(const ComparisonDataset& dataset, double tol, int max_iters) {
    if (dataset.empty()) {
        throw ConfigError("spectral norm of an empty comparison matrix");
    }
    const auto m = dataset.num_items();
    const auto entries = dataset.entries();

    std::vector<double> v(m);
    Rng rng(0x9e3779b97f4a7c15ULL);
    for (auto& value : v) {
        value = rng.uniform(-1.0, 1.0);
    }
    std::vector<double> av(entries.size());
    std::vector<double> atav(m);

    const auto normalize = [](std::vector<double>& x) {
        double norm2 = 0.0;
        for (const auto value : x) {
            norm2 += value * value;
        }
        const double norm = std::sqrt(norm2);
        if (norm > 0.0) {
            for (auto& value : x) {
                value /= norm;
            }
        }
        return norm;
    };
    normalize(v);

    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        double rayleigh = 0.0;
        for (std::size_t n = 0; n < entries.size(); ++n) {
            av[n] = signed_row(entries[n]).dot(v);
            rayleigh += av[n] * av[n];
        }
        std::fill(atav.begin(), atav.end(), 0.0);
        for (std::size_t n = 0; n < entries.size(); ++n) {
            const auto row = signed_row(entries[n]);
            atav[row.plus] += av[n];
            atav[row.minus] -= av[n];
        }
        const bool done = it > 0 && std::abs(rayleigh - lambda) <= tol * rayleigh;
        lambda = std::max(lambda, rayleigh);
        if (done) {
            break;
        }
        v.swap(atav);
        if (normalize(v) == 0.0) {
            break;
        }
    }
    return std::sqrt(lambda);
}

}  // namespace pdrank
