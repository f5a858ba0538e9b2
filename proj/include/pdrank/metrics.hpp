#pragma once

#include <cstdint>
#include <span>

#include "pdrank/dataset.hpp"

namespace pdrank {

struct KendallCounts {
    std::uint64_t concordant = 0;
    std::uint64_t discordant = 0;
};

/// Concordant/discordant pair counts between two full rankings, by merge-sort
/// inversion counting in O(m log m). Throws ConfigError on a size mismatch.
[[nodiscard]] KendallCounts kendall_counts(const Ranking& a, const Ranking& b);

/// (P - Q) / (P + Q). Rankings are strict, so P + Q = m(m-1)/2 and this is
/// tau-a. Defined as 1 for fewer than two items.
[[nodiscard]] double kendall_tau(const Ranking& a, const Ranking& b);

/// Multiplicity-weighted fraction of dataset entries whose pair is ordered
/// by `scores` the same way as by `true_scores`. A zero score difference is
/// a mismatch. Returns 0 for an empty dataset.
[[nodiscard]] double label_accuracy(std::span<const double> scores, const ComparisonDataset& dataset,
                                    std::span<const double> true_scores);

}  // namespace pdrank
