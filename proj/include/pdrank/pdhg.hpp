#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "pdrank/dataset.hpp"

namespace pdrank {

/// User-facing knobs for one subproblem solve. Step sizes are derived from
/// the operator norm: tau = sigma = step_scale / (norm_inflation * ||A||).
struct PdhgOptions {
    double lambda = 1.0;   ///< relaxation, in (0, 2)
    double eps_in = 0.01;  ///< relative cost-change stopping threshold
    int max_iters = 20000;
    double step_scale = 0.99;
    double norm_inflation = 1.01;
    /// Cost is evaluated every iteration up to this many entries, and every
    /// `large_cost_stride`-th iteration beyond it.
    std::size_t thin_cost_above = 1'000'000;
    int large_cost_stride = 10;
    bool record_trace = true;
};

/// Validated PDHG parameters. Construction enforces tau*sigma*||A||^2 <= 1
/// and lambda in (0, 2).
class PdhgConfig {
public:
    PdhgConfig(double tau, double sigma, double operator_norm, double lambda, double eps_in,
               int max_iters, int cost_stride = 1, bool record_trace = true);

    /// Estimates ||A|| by power iteration and applies the default step rule.
    static PdhgConfig for_dataset(const ComparisonDataset& dataset, const PdhgOptions& options = {});
    static PdhgConfig from_operator_norm(double operator_norm, std::size_t num_entries,
                                         const PdhgOptions& options = {});

    [[nodiscard]] double tau() const { return tau_; }
    [[nodiscard]] double sigma() const { return sigma_; }
    [[nodiscard]] double operator_norm() const { return operator_norm_; }
    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] double eps_in() const { return eps_in_; }
    [[nodiscard]] int max_iters() const { return max_iters_; }
    [[nodiscard]] int cost_stride() const { return cost_stride_; }
    [[nodiscard]] bool record_trace() const { return record_trace_; }

    [[nodiscard]] PdhgConfig with_eps_in(double eps_in) const;
    [[nodiscard]] PdhgConfig with_max_iters(int max_iters) const;

private:
    double tau_;
    double sigma_;
    double operator_norm_;
    double lambda_;
    double eps_in_;
    int max_iters_;
    int cost_stride_;
    bool record_trace_;
};

struct TracePoint {
    int iteration = 0;
    double cost = 0.0;
    double wall_time_s = 0.0;
};

struct PdhgResult {
    RankScores x;
    std::vector<double> v;  ///< final dual iterate
    int iterations = 0;
    bool converged = false;
    double final_cost = 0.0;
    std::vector<TracePoint> trace;  ///< iteration 0 is the starting point
};

/// sum_n omega_n * mult_n * log(1 + e^{1 - a_n^T x}) + gamma * ||x||^2.
/// `omega` holds one weight per dataset entry, without multiplicity.
[[nodiscard]] double subproblem_cost(std::span<const double> x, const ComparisonDataset& dataset,
                                     std::span<const double> omega, double gamma);

/// Gradient of the data term at x: v_n = -omega_n mult_n logistic(1 - a_n^T x).
/// At a solution the PDHG dual iterate converges to this.
[[nodiscard]] std::vector<double> dual_from_primal(std::span<const double> x,
                                                   const ComparisonDataset& dataset,
                                                   std::span<const double> omega);

/// Solves  min_x  sum_n omega_n mult_n LSE(1 - a_n^T x) + gamma ||x||^2  s.t. 1^T x = 0
/// with the over-relaxed PDHG iteration
///
///   p = prox_{tau f}(x - tau A^T v)
///   q = prox_{sigma g*}(v + sigma A (2p - x))
///   (x, v) += lambda ((p, q) - (x, v))
///
/// Stops once |cost_k - cost_{k-1}| falls below eps_in times the first nonzero
/// cost change, once the change is at rounding level, or at max_iters.
/// eps_in = 0 disables both cost tests and runs exactly max_iters.
/// x0 (default zero) is centred before use; v0 defaults to zero.
/// Throws DivergenceError when the cost becomes non-finite, or once the step
/// length in the PDHG metric has grown (impossible while tau*sigma*||A||^2 <= 1
/// holds for the true norm) and either the cost exceeds 10x its running minimum
/// or the step exceeds twice its running minimum.
[[nodiscard]] PdhgResult pdhg_solve(const ComparisonDataset& dataset, std::span<const double> omega,
                                    double gamma, const PdhgConfig& cfg,
                                    std::span<const double> x0 = {},
                                    std::optional<std::span<const double>> v0 = std::nullopt);

/// CSV with columns iteration,cost,wall_time_s.
void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace);

}  // namespace pdrank
