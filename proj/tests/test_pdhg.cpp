#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pdrank/baselines.hpp"
#include "pdrank/errors.hpp"
#include "pdrank/pdhg.hpp"
#include "pdrank/prox.hpp"
#include "pdrank/random.hpp"
#include "pdrank/synthetic.hpp"

using namespace pdrank;

namespace {

std::vector<oracle::Row> oracle_rows(const ComparisonDataset& d, const std::vector<double>& omega) {
    std::vector<oracle::Row> rows;
    for (std::size_t n = 0; n < d.size(); ++n) {
        const auto& e = d[n];
        rows.push_back({e.i, e.j, e.label, omega[n] * static_cast<double>(e.multiplicity)});
    }
    return rows;
}

struct Instance {
    ComparisonDataset data;
    std::vector<double> omega;
};

Instance random_instance(std::uint64_t seed) {
    Rng rng(seed);
    ToggleNoiseConfig cfg;
    cfg.num_items = 3 + rng.index(18);
    cfg.delta = 0.1;
    cfg.standard_trials = rng.uniform(0.5, 4.0);
    cfg.seed = seed;
    auto data = generate_toggle(cfg).data;
    std::vector<double> omega(data.size());
    for (auto& w : omega) {
        w = std::pow(10.0, rng.uniform(-1.0, 3.0));
    }
    return {std::move(data), std::move(omega)};
}

// eps_in = 0 runs a fixed budget, which converges these sizes to ~1e-10.
PdhgConfig converge_fully(const ComparisonDataset& d) {
    PdhgOptions options;
    options.eps_in = 0.0;
    options.max_iters = 20000;
    return PdhgConfig::for_dataset(d, options);
}

}  // namespace

TEST(SubproblemCost, ClosedForms) {
    const auto one = ComparisonDataset::from_entries(2, {{0, 1, 1, 1}});
    EXPECT_NEAR(subproblem_cost(std::vector<double>{0, 0}, one, std::vector<double>{1.0}, 0.0),
                std::log1p(std::exp(1.0)), 1e-15);
    EXPECT_NEAR(std::log1p(std::exp(1.0)), 1.31326, 1e-5);

    const auto three = ComparisonDataset::from_entries(3, {{0, 1, 1, 1}, {1, 2, 1, 1}, {0, 2, 1, 2}});
    // margins 0.5, 0.5 and 1.0 (the last counted twice)
    const std::vector<double> x{0.5, 0.0, -0.5};
    const std::vector<double> omega{1.0, 1.0, 1.0};
    const auto rows = oracle_rows(three, omega);
    EXPECT_NEAR(subproblem_cost(x, three, omega, 0.3), oracle::subproblem_cost(rows, x, 0.3), 1e-13);

    const auto unit_margin = ComparisonDataset::from_entries(2, {{0, 1, 1, 3}});
    EXPECT_NEAR(subproblem_cost(std::vector<double>{0.5, -0.5}, unit_margin, std::vector<double>{1.0}, 0.0),
                3.0 * std::log(2.0), 1e-15);
    EXPECT_NEAR(3.0 * std::log(2.0), 2.07944, 1e-5);

    const double far = subproblem_cost(std::vector<double>{25.0, -25.0}, one, std::vector<double>{1.0}, 0.0);
    EXPECT_TRUE(std::isfinite(far));
    EXPECT_NEAR(far, std::exp(-49.0), 1e-12 * std::exp(-49.0));
    EXPECT_LT(far, 5.25e-22);
}

TEST(PdhgConfig, EnforcesStepContract) {
    EXPECT_THROW(PdhgConfig(1.0, 1.0, 2.0, 1.0, 0.01, 10), ConfigError);
    EXPECT_NO_THROW(PdhgConfig(0.5, 0.5, 2.0, 1.0, 0.01, 10));
    EXPECT_THROW(PdhgConfig(0.1, 0.1, 2.0, 2.0, 0.01, 10), ConfigError);
    EXPECT_THROW(PdhgConfig(0.1, 0.1, 2.0, 0.0, 0.01, 10), ConfigError);
    EXPECT_THROW(PdhgConfig(0.0, 0.1, 2.0, 1.0, 0.01, 10), ConfigError);
    EXPECT_THROW(PdhgConfig(0.1, 0.1, 2.0, 1.0, -1.0, 10), ConfigError);
    EXPECT_THROW(PdhgConfig(0.1, 0.1, 2.0, 1.0, 0.01, 0), ConfigError);

    const auto d = ComparisonDataset::from_entries(3, {{0, 1, 1, 1}, {1, 2, 1, 1}, {0, 2, -1, 4}});
    const auto cfg = PdhgConfig::for_dataset(d);
    EXPECT_LE(cfg.tau() * cfg.sigma() * cfg.operator_norm() * cfg.operator_norm(), 1.0);
    EXPECT_DOUBLE_EQ(cfg.tau(), cfg.sigma());
    EXPECT_NEAR(cfg.tau(), 0.99 / (1.01 * spectral_norm(d)), 1e-15);
}

TEST(Pdhg, SingleComparisonIsAntisymmetric) {
    const auto d = ComparisonDataset::from_entries(2, {{0, 1, 1, 1}});
    const auto r = pdhg_solve(d, std::vector<double>{1.0}, 0.01, converge_fully(d));
    EXPECT_EQ(r.iterations, 20000);
    EXPECT_GT(r.x[0], r.x[1]);
    EXPECT_NEAR(r.x[0], -r.x[1], 1e-12);
    const auto pg = projected_gradient_subproblem(d, std::vector<double>{1.0}, 0.01);
    EXPECT_NEAR(r.x[0], pg.x[0], 1e-6);
}

TEST(Pdhg, NoiselessTriangleRecoversOrderAndZeroOneOptimum) {
    const std::vector<double> truth{3, 2, 1};
    std::vector<Comparison> entries;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            entries.push_back({i, j, truth[i] > truth[j] ? 1 : -1, 1});
        }
    }
    const auto d = ComparisonDataset::from_entries(3, entries);
    const auto r = pdhg_solve(d, std::vector<double>(3, 1.0), 0.01, PdhgConfig::for_dataset(d));
    const auto ranking = scores_to_ranking(r.x);
    EXPECT_EQ(ranking, Ranking(std::vector<std::size_t>{0, 1, 2}));
    const auto best = brute_force_01(d);
    EXPECT_EQ(best.ranking, ranking);
    EXPECT_EQ(best.cost, 0u);
}

TEST(Pdhg, UniqueSolutionFromDistinctStarts) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = random_instance(seed);
        const auto cfg = converge_fully(inst.data);
        Rng rng(seed + 1000);
        std::vector<double> x0(inst.data.num_items());
        for (auto& v : x0) {
            v = rng.uniform(-5.0, 5.0);
        }
        const auto a = pdhg_solve(inst.data, inst.omega, 0.01, cfg);
        const auto b = pdhg_solve(inst.data, inst.omega, 0.01, cfg, x0);
        double diff = 0.0;
        double norm = 0.0;
        for (std::size_t k = 0; k < a.x.size(); ++k) {
            diff += (a.x[k] - b.x[k]) * (a.x[k] - b.x[k]);
            norm += a.x[k] * a.x[k];
        }
        EXPECT_LE(std::sqrt(diff / norm), 1e-4) << "seed " << seed;
    }
}

TEST(Pdhg, MatchesProjectedGradientOracle) {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
        const auto inst = random_instance(seed);
        const auto r = pdhg_solve(inst.data, inst.omega, 0.01, converge_fully(inst.data));
        const auto pg = projected_gradient_subproblem(inst.data, inst.omega, 0.01);
        EXPECT_LE(std::abs(r.final_cost - pg.cost), 1e-3 * pg.cost) << "seed " << seed;
        EXPECT_NEAR(r.final_cost, oracle::subproblem_cost(oracle_rows(inst.data, inst.omega), r.x, 0.01),
                    1e-9 * r.final_cost);
        // the dual iterate converges to the gradient of the data term
        const auto v_star = dual_from_primal(r.x, inst.data, inst.omega);
        for (std::size_t n = 0; n < v_star.size(); ++n) {
            EXPECT_NEAR(r.v[n], v_star[n], 1e-4 * (1.0 + std::abs(v_star[n])));
        }
    }
}

TEST(Pdhg, IteratesStayZeroMean) {
    const auto inst = random_instance(3);
    PdhgOptions options;
    options.max_iters = 1;
    const auto cfg = PdhgConfig::for_dataset(inst.data, options);
    std::vector<double> x(inst.data.num_items(), 0.0);
    x[0] = 4.0;  // the start is centred before use
    std::vector<double> v;
    for (int it = 0; it < 50; ++it) {
        const auto r = v.empty() ? pdhg_solve(inst.data, inst.omega, 0.01, cfg, x)
                                 : pdhg_solve(inst.data, inst.omega, 0.01, cfg, x, std::span<const double>(v));
        const double sum = std::accumulate(r.x.begin(), r.x.end(), 0.0);
        const double scale = std::accumulate(r.x.begin(), r.x.end(), 0.0,
                                             [](double acc, double value) { return acc + std::abs(value); });
        ASSERT_LE(std::abs(sum), 1e-13 * (1.0 + scale));
        ASSERT_LE(std::abs(sum), 1e-8 * static_cast<double>(r.x.size()));
        x = r.x;
        v = r.v;
    }
}

TEST(Pdhg, DeterministicTrace) {
    const auto inst = random_instance(4);
    const auto cfg = PdhgConfig::for_dataset(inst.data);
    const auto a = pdhg_solve(inst.data, inst.omega, 0.01, cfg);
    const auto b = pdhg_solve(inst.data, inst.omega, 0.01, cfg);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
        EXPECT_EQ(a.trace[k].cost, b.trace[k].cost);
    }
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.trace.front().iteration, 0);
    EXPECT_EQ(a.trace.back().iteration, a.iterations);
}

TEST(Pdhg, TighterToleranceRunsLonger) {
    const auto inst = random_instance(6);
    PdhgOptions loose;
    loose.eps_in = 1e-2;
    PdhgOptions tight;
    tight.eps_in = 1e-5;
    const auto a = pdhg_solve(inst.data, inst.omega, 0.01, PdhgConfig::for_dataset(inst.data, loose));
    const auto b = pdhg_solve(inst.data, inst.omega, 0.01, PdhgConfig::for_dataset(inst.data, tight));
    EXPECT_TRUE(a.converged);
    EXPECT_LT(a.iterations, b.iterations);
    PdhgOptions capped;
    capped.eps_in = 0.0;
    capped.max_iters = 7;
    const auto c = pdhg_solve(inst.data, inst.omega, 0.01, PdhgConfig::for_dataset(inst.data, capped));
    EXPECT_FALSE(c.converged);
    EXPECT_EQ(c.iterations, 7);
}

TEST(Pdhg, OverRelaxationReachesSameSolution) {
    const auto inst = random_instance(8);
    PdhgOptions relaxed;
    relaxed.lambda = 1.5;
    relaxed.eps_in = 0.0;
    relaxed.max_iters = 20000;
    const auto a = pdhg_solve(inst.data, inst.omega, 0.01, converge_fully(inst.data));
    const auto b = pdhg_solve(inst.data, inst.omega, 0.01, PdhgConfig::for_dataset(inst.data, relaxed));
    EXPECT_NEAR(a.final_cost, b.final_cost, 1e-8 * a.final_cost);
}

TEST(Pdhg, DetectsViolatedStepContract) {
    ToggleNoiseConfig gen;
    gen.num_items = 16;
    gen.standard_trials = 3.0;
    gen.seed = 3;
    const auto d = generate_toggle(gen).data;
    const std::vector<double> omega(d.size(), 1.0);
    // an underestimate of ||A|| passes the constructor check but not the true bound
    for (const double factor : {100.0, 10.0, 1.5}) {
        const auto cfg = PdhgConfig::from_operator_norm(spectral_norm(d) / factor, d.size());
        EXPECT_THROW((void)pdhg_solve(d, omega, 0.01, cfg), DivergenceError) << factor;
    }
}

TEST(Pdhg, StepsExactlyAtTheBoundDoNotTrip) {
    // complete graph on k items: ||A|| = sqrt(k) exactly
    std::vector<Comparison> entries;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) {
            entries.push_back({i, j, (i + j) % 3 == 0 ? -1 : 1, 1});
        }
    }
    const auto d = ComparisonDataset::from_entries(6, entries);
    const double norm = std::sqrt(6.0);
    const PdhgConfig cfg(1.0 / norm, 1.0 / norm, norm, 1.0, 1e-10, 100000);
    const std::vector<double> omega(d.size(), 1.0);
    const auto r = pdhg_solve(d, omega, 0.01, cfg);
    const auto pg = projected_gradient_subproblem(d, omega, 0.01);
    EXPECT_NEAR(r.final_cost, pg.cost, 1e-6 * pg.cost);
}

TEST(Pdhg, FarStartsUnderValidStepsDoNotTrip) {
    // the cost can rise far above its running minimum before settling
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = random_instance(seed);
        Rng rng(seed);
        std::vector<double> x0(inst.data.num_items());
        for (auto& v : x0) {
            v = rng.uniform(-5.0, 5.0);
        }
        std::vector<double> v0(inst.data.size());
        for (std::size_t n = 0; n < v0.size(); ++n) {
            v0[n] = -rng.uniform() * inst.omega[n] * static_cast<double>(inst.data[n].multiplicity);
        }
        EXPECT_NO_THROW((void)pdhg_solve(inst.data, inst.omega, 0.01, PdhgConfig::for_dataset(inst.data), x0,
                                         std::span<const double>(v0)))
            << "seed " << seed;
    }
}

TEST(Pdhg, RejectsMismatchedInputs) {
    const auto d = ComparisonDataset::from_entries(3, {{0, 1, 1, 1}, {1, 2, 1, 1}});
    const auto cfg = PdhgConfig::for_dataset(d);
    EXPECT_THROW((void)pdhg_solve(d, std::vector<double>{1.0}, 0.01, cfg), ConfigError);
    EXPECT_THROW((void)pdhg_solve(d, std::vector<double>{1.0, 0.0}, 0.01, cfg), ConfigError);
    EXPECT_THROW((void)pdhg_solve(d, std::vector<double>{1.0, 1.0}, -1.0, cfg), ConfigError);
    EXPECT_THROW((void)pdhg_solve(d, std::vector<double>{1.0, 1.0}, 0.01, cfg, std::vector<double>{1.0}),
                 ConfigError);
}

TEST(Pdhg, TraceCsv) {
    const std::vector<TracePoint> trace{{0, 2.5, 0.0}, {1, 1.25, 0.001}};
    std::ostringstream out;
    write_trace_csv(out, trace);
    EXPECT_EQ(out.str(), "iteration,cost,wall_time_s\n0,2.5,0\n1,1.25,0.001\n");
}
