#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pdrank/dataset.hpp"
#include "pdrank/random.hpp"

namespace pdrank {

/// Score-independent toggle noise: every label is flipped with probability
/// delta. The number of comparisons is `num_comparisons` when set, otherwise
/// derived from `standard_trials`.
struct ToggleNoiseConfig {
    std::size_t num_items = 16;
    double delta = 0.1;
    double standard_trials = 1.0;
    std::optional<std::size_t> num_comparisons;
    std::uint64_t seed = 0;
    /// Per-comparison flip probabilities; overrides `delta` when non-empty
    /// and must then have one value per comparison.
    std::vector<double> per_comparison_delta;
};

/// Bradley-Terry generator: latent strengths uniform on [score_low, score_high],
/// P(i beats j) = s_i / (s_i + s_j).
struct BTGenConfig {
    std::size_t num_items = 16;
    double score_low = 1.0;
    double score_high = 5.0;
    double standard_trials = 1.0;
    std::optional<std::size_t> num_comparisons;
    std::uint64_t seed = 0;
    /// Fixed positive latent scores; replaces the uniform draw when non-empty
    /// and must then have one value per item.
    std::vector<double> scores;
};

struct GroundTruth {
    RankScores true_scores;
    Ranking true_ranking;
};

struct SyntheticData {
    ComparisonDataset data;                 ///< compressed
    GroundTruth truth;
    std::vector<Observation> observations;  ///< raw draws, in sampling order
    std::size_t flipped = 0;                ///< observations disagreeing with the truth
};

/// round(t * m(m-1)/2). Throws ConfigError if m < 2 or t < 0.
[[nodiscard]] std::size_t standard_trials_to_n(std::size_t num_items, double standard_trials);

/// n unordered pairs (i < j), uniform over all m(m-1)/2 pairs, with replacement.
[[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t num_items,
                                                                            std::size_t n, Rng& rng);
[[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t num_items,
                                                                            std::size_t n,
                                                                            std::uint64_t seed);

/// True scores are a random permutation of 1..M.
[[nodiscard]] SyntheticData generate_toggle(const ToggleNoiseConfig& cfg);
[[nodiscard]] SyntheticData generate_bt(const BTGenConfig& cfg);

}  // namespace pdrank
