#include "pdrank/reweight.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "pdrank/errors.hpp"
#include "pdrank/prox.hpp"

namespace pdrank {

void PDRankConfig::validate() const {
    if (!(epsilon > 0.0)) {
        throw ConfigError("epsilon must be > 0");
    }
    if (!(gamma >= 0.0)) {
        throw ConfigError("gamma must be >= 0");
    }
    if (max_outer_iters < 1) {
        throw ConfigError("max_outer_iters must be >= 1");
    }
    if (!(band_lo < 1.0 && band_hi > 1.0)) {
        throw ConfigError("weight band must straddle 1");
    }
    if (!(stab_tol >= 0.0)) {
        throw ConfigError("stab_tol must be >= 0");
    }
}

WeightVector update_weights(std::span<const double> x, const ComparisonDataset& dataset,
                            double epsilon) {
    if (!(epsilon > 0.0)) {
        throw ConfigError("epsilon must be > 0");
    }
    const auto entries = dataset.entries();
    WeightVector omega(entries.size());
    for (std::size_t n = 0; n < entries.size(); ++n) {
        omega[n] = 1.0 / (lse(1.0 - signed_row(entries[n]).dot(x)) + epsilon);
    }
    return omega;
}

double surrogate_cost(std::span<const double> x, const ComparisonDataset& dataset, double epsilon,
                      double gamma) {
    double total = 0.0;
    for (const auto& e : dataset.entries()) {
        total += static_cast<double>(e.multiplicity) *
                 std::log(lse(1.0 - signed_row(e).dot(x)) + epsilon);
    }
    double ridge = 0.0;
    for (const auto value : x) {
        ridge += value * value;
    }
    return total + gamma * ridge;
}

bool outer_converged(std::span<const WeightVector> history, double band_lo, double band_hi,
                     double stab_tol) {
    if (history.size() < 2) {
        return false;
    }
    const auto& prev = history[history.size() - 2];
    const auto& last = history.back();
    double max_change = 0.0;
    bool band_empty = true;
    for (std::size_t n = 0; n < last.size(); ++n) {
        max_change = std::max(max_change, std::abs(last[n] - prev[n]) / prev[n]);
        if (last[n] > band_lo && last[n] < band_hi) {
            band_empty = false;
        }
    }
    return max_change < stab_tol || band_empty;
}

PDRankResult pd_rank(const ComparisonDataset& dataset, const PDRankConfig& cfg) {
    if (dataset.empty()) {
        throw ConfigError("pd_rank needs at least one comparison");
    }
    const auto start = std::chrono::steady_clock::now();
    const double norm = spectral_norm(dataset);
    const double norm_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto result = pd_rank(dataset, cfg, norm);
    result.wall_time_s += norm_time;
    return result;
}

PDRankResult pd_rank(const ComparisonDataset& dataset, const PDRankConfig& cfg,
                     double operator_norm) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    cfg.validate();
    if (dataset.empty()) {
        throw ConfigError("pd_rank needs at least one comparison");
    }
    const auto pdhg = PdhgConfig::from_operator_norm(operator_norm, dataset.size(), cfg.inner);

    PDRankResult result;
    WeightVector omega(dataset.size(), 1.0);
    std::vector<WeightVector> recent{omega};
    if (cfg.keep_weight_history) {
        result.weight_history.push_back(omega);
    }

    RankScores x(dataset.num_items(), 0.0);
    for (int k = 1; k <= cfg.max_outer_iters; ++k) {
        auto solve = pdhg_solve(dataset, omega, cfg.gamma, pdhg,
                                cfg.warm_start ? std::span<const double>(x) : std::span<const double>{});
        result.inner_iters += solve.iterations;
        result.subproblem_costs.push_back(solve.final_cost);
        x = std::move(solve.x);
        result.surrogate_costs.push_back(surrogate_cost(x, dataset, cfg.epsilon, cfg.gamma));
        result.outer_iters = k;

        omega = update_weights(x, dataset, cfg.epsilon);
        if (cfg.keep_weight_history) {
            result.weight_history.push_back(omega);
        }
        recent.push_back(omega);
        if (recent.size() > 2) {
            recent.erase(recent.begin());
        }
        if (outer_converged(recent, cfg.band_lo, cfg.band_hi, cfg.stab_tol)) {
            result.outer_converged = true;
            break;
        }
    }

    result.ranking = scores_to_ranking(x);
    result.scores = std::move(x);
    result.confidence = std::move(omega);
    result.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

}  // namespace pdrank
