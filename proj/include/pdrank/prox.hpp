#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pdrank/dataset.hpp"

namespace pdrank {

/// Softplus log(1 + e^t), stable for any finite t.
[[nodiscard]] double lse(double t);

/// e^t / (1 + e^t), stable for any finite t.
[[nodiscard]] double logistic(double t);

struct ProxFParams {
    double gamma = 0.01;  ///< ridge weight, >= 0
    double tau = 1.0;     ///< prox step, > 0
};

/// prox of tau*(gamma*||u||^2 + indicator{1^T u = 0}): scale by 1/(1 + 2*gamma*tau),
/// then subtract the mean.
[[nodiscard]] std::vector<double> prox_f(std::span<const double> x, const ProxFParams& params);
/// In-place form used inside the solver loop.
void prox_f_inplace(std::span<double> x, const ProxFParams& params);

/// Root problem  -e^{1-u}/(1+e^{1-u}) + (u - x_tilde)/w_tilde = 0,
/// i.e. the prox of w_tilde * log(1 + e^{1-u}) evaluated at x_tilde.
struct ScalarProxProblem {
    double x_tilde = 0.0;
    double w_tilde = 1.0;  ///< > 0
};

struct ScalarProxSolution {
    double u = 0.0;
    /// (u - x_tilde)/w_tilde in (0, 1); carried separately because forming it
    /// from u loses precision when w_tilde is small.
    double fraction = 0.0;
    /// Root-equation value at the returned point.
    double residual = 0.0;
    int iterations = 0;
};

inline constexpr double kScalarProxTol = 1e-12;

/// Safeguarded Newton on the bracket (x_tilde, x_tilde + w_tilde) with a
/// bisection fallback. Stops once |residual| <= tol or the bracket has
/// shrunk to adjacent doubles. Throws ConfigError for w_tilde <= 0 or
/// non-finite input, DivergenceError if the iteration cap is reached.
/// `start_fraction` seeds Newton when it lies inside the bracket.
[[nodiscard]] ScalarProxSolution scalar_lse_prox(const ScalarProxProblem& problem,
                                                 double tol = kScalarProxTol,
                                                 std::optional<double> start_fraction = std::nullopt);

/// Value of the root equation at u (direct evaluation, for checks).
[[nodiscard]] double scalar_lse_residual(const ScalarProxProblem& problem, double u);

/// prox_{sigma g*}(v) for g(z) = sum_n weights_n * log(1 + e^{1 - z_n}), via
/// Moreau decomposition: v - sigma * prox_{g/sigma}(v/sigma), componentwise.
/// `weights` must already include multiplicities. Components are independent.
[[nodiscard]] std::vector<double> prox_g_star(std::span<const double> v,
                                              std::span<const double> weights, double sigma);
void prox_g_star_inplace(std::span<double> v, std::span<const double> weights, double sigma);
/// As above, seeding each scalar solve with start_fractions_n (e.g. -v_n/weights_n
/// of the previous dual iterate). No argument checks.
void prox_g_star_inplace(std::span<double> v, std::span<const double> weights, double sigma,
                         std::span<const double> start_fractions);

/// prox_{g/sigma}(z) componentwise (the primal half of the Moreau pair).
[[nodiscard]] std::vector<double> prox_g_scaled(std::span<const double> z,
                                                std::span<const double> weights, double sigma);

/// Power-iteration estimate of ||A||_2 where A has one signed row per dataset
/// entry (multiplicity does not scale rows). Stops when the relative change of
/// the eigenvalue estimate of A^T A drops below tol, or after max_iters.
[[nodiscard]] double spectral_norm(const ComparisonDataset& dataset, double tol = 1e-6,
                                   int max_iters = 200);

}  // namespace pdrank
