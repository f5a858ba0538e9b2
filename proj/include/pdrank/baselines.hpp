#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pdrank/dataset.hpp"

namespace pdrank {

// ---- Borda count ----

struct BordaResult {
    /// Multiplicity-weighted fraction of won comparisons; 0.5 for unobserved items.
    std::vector<double> scores;
    Ranking ranking;
};

[[nodiscard]] BordaResult borda(const ComparisonDataset& dataset);

// ---- Bradley-Terry ----

struct BTOptions {
    double tol = 1e-10;  ///< relative log-likelihood change
    int max_iters = 100000;
    double pseudo_count = 0.1;
};

struct BTResult {
    /// Positive strengths normalised to geometric mean 1 (product = 1).
    std::vector<double> strengths;
    Ranking ranking;
    /// Log-likelihood after each MM sweep (first value: uniform start).
    std::vector<double> log_likelihood;
    int iterations = 0;
    bool converged = false;
    /// The win graph was not strongly connected, so every pair received
    /// `pseudo_count` wins in each direction before fitting.
    bool regularized = false;
};

/// Bradley-Terry maximum likelihood via minorization-maximization updates
/// p_i <- W_i / sum_j n_ij / (p_i + p_j).
[[nodiscard]] BTResult bt_fit(const ComparisonDataset& dataset, const BTOptions& options = {});

/// True when every item can reach every other along "beat" edges.
[[nodiscard]] bool win_graph_strongly_connected(const ComparisonDataset& dataset);

// ---- 0-1 loss ----

/// Multiplicity-weighted number of entries whose label the ranking violates.
[[nodiscard]] std::uint64_t zero_one_cost(const Ranking& ranking, const ComparisonDataset& dataset);

inline constexpr std::size_t kBruteForceMaxItems = 8;

struct BruteForceResult {
    Ranking ranking;
    std::uint64_t cost = 0;
};

/// Exact 0-1 loss minimiser by enumerating all M! orderings; the
/// lexicographically first optimal ordering wins. Throws ConfigError for M > 8.
[[nodiscard]] BruteForceResult brute_force_01(const ComparisonDataset& dataset);

// ---- subproblem oracle ----

struct ProjectedGradientOptions {
    double tol = 1e-9;  ///< gradient-mapping norm
    int max_iters = 2'000'000;
};

struct ProjectedGradientResult {
    RankScores x;
    int iterations = 0;
    double gradient_mapping_norm = 0.0;
    double cost = 0.0;
};

/// Projected gradient descent with backtracking on the reweighted subproblem
/// (same objective as pdhg_solve; the projection is mean subtraction). An
/// independent reference for the PDHG solver. Throws ConvergenceError at the
/// iteration cap.
[[nodiscard]] ProjectedGradientResult projected_gradient_subproblem(
    const ComparisonDataset& dataset, std::span<const double> omega, double gamma,
    const ProjectedGradientOptions& options = {});

}  // namespace pdrank
