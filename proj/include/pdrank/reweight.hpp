#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pdrank/dataset.hpp"
#include "pdrank/pdhg.hpp"

namespace pdrank {

/// Per-entry outer-loop weights omega_n; the final iterate is reported as
/// the confidence in each judgment (values below 1 flag likely-wrong labels).
using WeightVector = std::vector<double>;

struct PDRankConfig {
    double epsilon = 1e-3;  ///< smoothing; weights are capped at 1/epsilon
    double gamma = 0.01;
    int max_outer_iters = 30;
    double stab_tol = 1e-3;  ///< max relative weight change that counts as stable
    double band_lo = 0.5;    ///< stop once no weight lies in (band_lo, band_hi)
    double band_hi = 2.0;
    PdhgOptions inner;
    /// Keep every outer weight iterate (for weight-evolution traces).
    bool keep_weight_history = false;
    /// Start each inner solve from the previous outer iterate.
    bool warm_start = true;

    void validate() const;
};

struct PDRankResult {
    RankScores scores;
    Ranking ranking;
    WeightVector confidence;  ///< final omega, one per dataset entry
    int outer_iters = 0;
    long long inner_iters = 0;
    double wall_time_s = 0.0;
    bool outer_converged = false;
    /// omega^0, omega^1, ... when requested; omega^0 = 1.
    std::vector<WeightVector> weight_history;
    /// Final inner cost of each subproblem solve.
    std::vector<double> subproblem_costs;
    /// sum_n mult_n log(LSE(1 - a_n^T x^k) + eps) + gamma ||x^k||^2 per outer iterate.
    std::vector<double> surrogate_costs;
};

/// omega_n = 1 / (LSE(1 - a_n^T x) + epsilon).
[[nodiscard]] WeightVector update_weights(std::span<const double> x,
                                          const ComparisonDataset& dataset, double epsilon);

/// The non-convex log-LSE surrogate that the reweighting scheme descends.
[[nodiscard]] double surrogate_cost(std::span<const double> x, const ComparisonDataset& dataset,
                                    double epsilon, double gamma);

/// True when the last two weight vectors differ by less than stab_tol
/// (max relative change), or when no weight of the last vector lies strictly
/// inside (band_lo, band_hi). Needs at least two iterates.
[[nodiscard]] bool outer_converged(std::span<const WeightVector> history, double band_lo,
                                   double band_hi, double stab_tol);

/// Iteratively reweighted PD-Rank: starting from omega^0 = 1, alternate
/// pdhg_solve and update_weights until outer_converged or max_outer_iters.
/// Throws ConfigError for an empty dataset, DivergenceError from the inner solver.
[[nodiscard]] PDRankResult pd_rank(const ComparisonDataset& dataset, const PDRankConfig& cfg = {});

/// Same, with a precomputed operator norm for the comparison matrix.
[[nodiscard]] PDRankResult pd_rank(const ComparisonDataset& dataset, const PDRankConfig& cfg,
                                   double operator_norm);

}  // namespace pdrank
