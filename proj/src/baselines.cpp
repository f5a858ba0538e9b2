#include "pdrank/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pdrank/errors.hpp"
#include "pdrank/pdhg.hpp"
#include "pdrank/prox.hpp"

namespace pdrank {

BordaResult borda(const ComparisonDataset& dataset) {
    const auto m = dataset.num_items();
    std::vector<double> wins(m, 0.0);
    std::vector<double> appearances(m, 0.0);
    for (const auto& e : dataset.entries()) {
        const auto row = signed_row(e);
        const auto count = static_cast<double>(e.multiplicity);
        wins[row.plus] += count;
        appearances[row.plus] += count;
        appearances[row.minus] += count;
    }
    BordaResult out;
    out.scores.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        out.scores[k] = appearances[k] > 0.0 ? wins[k] / appearances[k] : 0.5;
    }
    out.ranking = scores_to_ranking(out.scores);
    return out;
}

namespace {

struct PairTally {
    std::size_t i = 0;
    std::size_t j = 0;
    double wins_i = 0.0;  // times i beat j
    double wins_j = 0.0;
};

std::vector<PairTally> tally_pairs(const ComparisonDataset& dataset) {
    const auto compressed = compress(dataset);
    std::vector<PairTally> pairs;
    for (const auto& e : compressed.entries()) {
        // compressed entries are sorted by (i, j, label) with i < j
        if (pairs.empty() || pairs.back().i != e.i || pairs.back().j != e.j) {
            pairs.push_back({e.i, e.j, 0.0, 0.0});
        }
        (e.label > 0 ? pairs.back().wins_i : pairs.back().wins_j) += static_cast<double>(e.multiplicity);
    }
    return pairs;
}

bool reaches_all(std::size_t m, const std::vector<std::vector<std::size_t>>& adjacency) {
    std::vector<bool> seen(m, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const auto k = stack.back();
        stack.pop_back();
        for (const auto next : adjacency[k]) {
            if (!seen[next]) {
                seen[next] = true;
                ++count;
                stack.push_back(next);
            }
        }
    }
    return count == m;
}

bool strongly_connected(std::size_t m, const std::vector<PairTally>& pairs) {
    if (m <= 1) {
        return true;
    }
    std::vector<std::vector<std::size_t>> beats(m);
    std::vector<std::vector<std::size_t>> beaten_by(m);
    for (const auto& p : pairs) {
        if (p.wins_i > 0.0) {
            beats[p.i].push_back(p.j);
            beaten_by[p.j].push_back(p.i);
        }
        if (p.wins_j > 0.0) {
            beats[p.j].push_back(p.i);
            beaten_by[p.i].push_back(p.j);
        }
    }
    return reaches_all(m, beats) && reaches_all(m, beaten_by);
}

double bt_log_likelihood(const std::vector<PairTally>& pairs, const std::vector<double>& p) {
    double ll = 0.0;
    for (const auto& t : pairs) {
        const double log_sum = std::log(p[t.i] + p[t.j]);
        if (t.wins_i > 0.0) {
            ll += t.wins_i * (std::log(p[t.i]) - log_sum);
        }
        if (t.wins_j > 0.0) {
            ll += t.wins_j * (std::log(p[t.j]) - log_sum);
        }
    }
    return ll;
}

}  // namespace

bool win_graph_strongly_connected(const ComparisonDataset& dataset) {
    return strongly_connected(dataset.num_items(), tally_pairs(dataset));
}

BTResult bt_fit(const ComparisonDataset& dataset, const BTOptions& options) {
    if (dataset.empty()) {
        throw ConfigError("bt_fit needs at least one comparison");
    }
    const auto m = dataset.num_items();
    auto pairs = tally_pairs(dataset);

    BTResult out;
    if (!strongly_connected(m, pairs)) {
        out.regularized = true;
        std::vector<PairTally> all;
        all.reserve(m * (m - 1) / 2);
        std::size_t next = 0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                PairTally t{i, j, options.pseudo_count, options.pseudo_count};
                if (next < pairs.size() && pairs[next].i == i && pairs[next].j == j) {
                    t.wins_i += pairs[next].wins_i;
                    t.wins_j += pairs[next].wins_j;
                    ++next;
                }
                all.push_back(t);
            }
        }
        pairs = std::move(all);
    }

    std::vector<double> total_wins(m, 0.0);
    for (const auto& t : pairs) {
        total_wins[t.i] += t.wins_i;
        total_wins[t.j] += t.wins_j;
    }

    std::vector<double> p(m, 1.0);
    std::vector<double> denom(m);
    double ll = bt_log_likelihood(pairs, p);
    out.log_likelihood.push_back(ll);
    for (int it = 1; it <= options.max_iters; ++it) {
        std::fill(denom.begin(), denom.end(), 0.0);
        for (const auto& t : pairs) {
            const double share = (t.wins_i + t.wins_j) / (p[t.i] + p[t.j]);
            denom[t.i] += share;
            denom[t.j] += share;
        }
        double log_sum = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            p[k] = denom[k] > 0.0 ? total_wins[k] / denom[k] : p[k];
            log_sum += std::log(p[k]);
        }
        const double scale = std::exp(-log_sum / static_cast<double>(m));
        for (auto& value : p) {
            value *= scale;
        }
        const double next_ll = bt_log_likelihood(pairs, p);
        out.log_likelihood.push_back(next_ll);
        out.iterations = it;
        const double change = std::abs(next_ll - ll);
        ll = next_ll;
        if (change <= options.tol * std::max(1.0, std::abs(ll))) {
            out.converged = true;
            break;
        }
    }
    out.strengths = std::move(p);
    out.ranking = scores_to_ranking(out.strengths);
    return out;
}

std::uint64_t zero_one_cost(const Ranking& ranking, const ComparisonDataset& dataset) {
    if (ranking.size() != dataset.num_items()) {
        throw ConfigError("ranking and dataset disagree on the number of items");
    }
    const auto pos = ranking.positions();
    std::uint64_t cost = 0;
    for (const auto& e : dataset.entries()) {
        const auto row = signed_row(e);
        if (pos[row.plus] > pos[row.minus]) {
            cost += e.multiplicity;
        }
    }
    return cost;
}

BruteForceResult brute_force_01(const ComparisonDataset& dataset) {
    const auto m = dataset.num_items();
    if (m > kBruteForceMaxItems) {
        throw ConfigError("brute-force 0-1 oracle supports at most " +
                          std::to_string(kBruteForceMaxItems) + " items, got " + std::to_string(m));
    }
    std::vector<SignedRow> rows;
    std::vector<std::uint64_t> counts;
    for (const auto& e : dataset.entries()) {
        rows.push_back(signed_row(e));
        counts.push_back(e.multiplicity);
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::size_t> pos(m);
    std::vector<std::size_t> best = order;
    auto best_cost = std::numeric_limits<std::uint64_t>::max();
    do {
        for (std::size_t r = 0; r < m; ++r) {
            pos[order[r]] = r;
        }
        std::uint64_t cost = 0;
        for (std::size_t n = 0; n < rows.size() && cost < best_cost; ++n) {
            if (pos[rows[n].plus] > pos[rows[n].minus]) {
                cost += counts[n];
            }
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = order;
        }
    } while (std::next_permutation(order.begin(), order.end()));

    return {Ranking(std::move(best)), best_cost == std::numeric_limits<std::uint64_t>::max() ? 0 : best_cost};
}

ProjectedGradientResult projected_gradient_subproblem(const ComparisonDataset& dataset,
                                                      std::span<const double> omega, double gamma,
                                                      const ProjectedGradientOptions& options) {
    const auto m = dataset.num_items();
    const auto entries = dataset.entries();
    if (omega.size() != entries.size()) {
        throw ConfigError("projected gradient: weight vector length mismatch");
    }

    const auto gradient = [&](const std::vector<double>& x, std::vector<double>& g) {
        for (std::size_t k = 0; k < m; ++k) {
            g[k] = 2.0 * gamma * x[k];
        }
        for (std::size_t n = 0; n < entries.size(); ++n) {
            const auto row = signed_row(entries[n]);
            const double weight = omega[n] * static_cast<double>(entries[n].multiplicity);
            const double slope = -weight * logistic(1.0 - row.dot(x));
            g[row.plus] += slope;
            g[row.minus] -= slope;
        }
    };
    const auto objective = [&](const std::vector<double>& x) {
        return subproblem_cost(x, dataset, omega, gamma);
    };

    ProjectedGradientResult out;
    std::vector<double> x(m, 0.0);
    std::vector<double> g(m);
    std::vector<double> trial(m);
    double fx = objective(x);
    double step = 1.0;

    for (int it = 1; it <= options.max_iters; ++it) {
        gradient(x, g);
        double f_trial = 0.0;
        double dist2 = 0.0;
        double lin = 0.0;
        while (true) {
            for (std::size_t k = 0; k < m; ++k) {
                trial[k] = x[k] - step * g[k];
            }
            prox_f_inplace(trial, {0.0, 1.0});  // projection onto 1^T x = 0
            dist2 = 0.0;
            lin = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double d = trial[k] - x[k];
                dist2 += d * d;
                lin += g[k] * d;
            }
            f_trial = objective(trial);
            const double slack = 1e-15 * std::abs(fx);
            if (f_trial <= fx + lin + dist2 / (2.0 * step) + slack) {
                break;
            }
            step *= 0.5;
            if (step < 1e-30) {
                throw ConvergenceError("projected gradient line search failed");
            }
        }
        out.gradient_mapping_norm = std::sqrt(dist2) / step;
        x.swap(trial);
        fx = f_trial;
        out.iterations = it;
        if (out.gradient_mapping_norm < options.tol) {
            out.x = std::move(x);
            out.cost = fx;
            return out;
        }
        step *= 1.25;
    }
    throw ConvergenceError("projected gradient reached " + std::to_string(options.max_iters) +
                           " iterations (gradient mapping " +
                           std::to_string(out.gradient_mapping_norm) + ")");
}

}  // namespace pdrank
