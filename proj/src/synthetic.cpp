#include "pdrank/synthetic.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "pdrank/errors.hpp"

namespace pdrank {

namespace {

std::size_t resolve_count(std::size_t num_items, std::optional<std::size_t> explicit_count,
                          double standard_trials) {
    const auto n = explicit_count ? *explicit_count : standard_trials_to_n(num_items, standard_trials);
    if (n < 1) {
        throw ConfigError("number of comparisons must be >= 1");
    }
    return n;
}

}  // namespace

std::size_t standard_trials_to_n(std::size_t num_items, double standard_trials) {
    if (num_items < 2) {
        throw ConfigError("standard trials need at least 2 items");
    }
    if (!(standard_trials >= 0.0) || !std::isfinite(standard_trials)) {
        throw ConfigError("standard trials must be a finite value >= 0");
    }
    const double pairs = 0.5 * static_cast<double>(num_items) * static_cast<double>(num_items - 1);
    return static_cast<std::size_t>(std::llround(standard_trials * pairs));
}

std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t num_items, std::size_t n,
                                                              Rng& rng) {
    if (num_items < 2) {
        throw ConfigError("pair sampling needs at least 2 items");
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        // uniform ordered pair of distinct items, then sorted: uniform unordered pair
        const auto a = static_cast<std::size_t>(rng.index(num_items));
        auto b = static_cast<std::size_t>(rng.index(num_items - 1));
        if (b >= a) {
            ++b;
        }
        pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    return pairs;
}

std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t num_items, std::size_t n,
                                                              std::uint64_t seed) {
    Rng rng(seed);
    return sample_pairs(num_items, n, rng);
}

SyntheticData generate_toggle(const ToggleNoiseConfig& cfg) {
    if (cfg.num_items < 2) {
        throw ConfigError("toggle generator needs at least 2 items");
    }
    if (!(cfg.delta >= 0.0 && cfg.delta < 0.5)) {
        throw ConfigError("toggle probability must lie in [0, 0.5), got " + std::to_string(cfg.delta));
    }
    const auto n = resolve_count(cfg.num_items, cfg.num_comparisons, cfg.standard_trials);
    if (!cfg.per_comparison_delta.empty()) {
        if (cfg.per_comparison_delta.size() != n) {
            throw ConfigError("per-comparison delta needs " + std::to_string(n) + " values");
        }
        for (const auto d : cfg.per_comparison_delta) {
            if (!(d >= 0.0 && d < 0.5)) {
                throw ConfigError("per-comparison toggle probability outside [0, 0.5)");
            }
        }
    }

    Rng rng(cfg.seed);
    RankScores scores(cfg.num_items);
    std::iota(scores.begin(), scores.end(), 1.0);
    rng.shuffle(std::span<double>(scores));

    const auto pairs = sample_pairs(cfg.num_items, n, rng);
    SyntheticData out;
    out.observations.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto [i, j] = pairs[k];
        const int truth = scores[i] > scores[j] ? 1 : -1;
        const double delta = cfg.per_comparison_delta.empty() ? cfg.delta : cfg.per_comparison_delta[k];
        const bool flip = rng.bernoulli(delta);
        out.observations.push_back({i, j, flip ? -truth : truth});
        out.flipped += flip ? 1 : 0;
    }
    out.data = compress(cfg.num_items, std::span<const Observation>(out.observations));
    out.truth.true_ranking = scores_to_ranking(scores);
    out.truth.true_scores = std::move(scores);
    return out;
}

SyntheticData generate_bt(const BTGenConfig& cfg) {
    if (cfg.num_items < 2) {
        throw ConfigError("Bradley-Terry generator needs at least 2 items");
    }
    if (!(cfg.score_low > 0.0) || !(cfg.score_low <= cfg.score_high) || !std::isfinite(cfg.score_high)) {
        throw ConfigError("Bradley-Terry scores need 0 < score_low <= score_high");
    }
    const auto n = resolve_count(cfg.num_items, cfg.num_comparisons, cfg.standard_trials);

    Rng rng(cfg.seed);
    RankScores scores(cfg.num_items);
    if (cfg.scores.empty()) {
        for (auto& s : scores) {
            s = rng.uniform(cfg.score_low, cfg.score_high);
        }
    } else {
        if (cfg.scores.size() != cfg.num_items) {
            throw ConfigError("Bradley-Terry generator needs one fixed score per item");
        }
        for (const auto s : cfg.scores) {
            if (!(s > 0.0) || !std::isfinite(s)) {
                throw ConfigError("Bradley-Terry scores must be finite and > 0");
            }
        }
        scores = cfg.scores;
    }

    const auto pairs = sample_pairs(cfg.num_items, n, rng);
    SyntheticData out;
    out.observations.reserve(n);
    for (const auto& [i, j] : pairs) {
        const double p_i = scores[i] / (scores[i] + scores[j]);
        const int label = rng.bernoulli(p_i) ? 1 : -1;
        out.observations.push_back({i, j, label});
        const int truth = scores[i] > scores[j] ? 1 : (scores[i] < scores[j] ? -1 : 0);
        out.flipped += label != truth ? 1 : 0;
    }
    out.data = compress(cfg.num_items, std::span<const Observation>(out.observations));
    out.truth.true_ranking = scores_to_ranking(scores);
    out.truth.true_scores = std::move(scores);
    return out;
}

}  // namespace pdrank
