#include "pdrank/metrics.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "pdrank/errors.hpp"

namespace pdrank {

namespace {

// Sorts `values` and returns the number of inversions it contained.
std::uint64_t count_inversions(std::vector<std::size_t>& values) {
    std::vector<std::size_t> buffer(values.size());
    std::uint64_t inversions = 0;
    for (std::size_t width = 1; width < values.size(); width *= 2) {
        for (std::size_t lo = 0; lo < values.size(); lo += 2 * width) {
            const auto mid = std::min(lo + width, values.size());
            const auto hi = std::min(lo + 2 * width, values.size());
            std::size_t a = lo;
            std::size_t b = mid;
            std::size_t out = lo;
            while (a < mid && b < hi) {
                if (values[b] < values[a]) {
                    inversions += mid - a;
                    buffer[out++] = values[b++];
                } else {
                    buffer[out++] = values[a++];
                }
            }
            while (a < mid) {
                buffer[out++] = values[a++];
            }
            while (b < hi) {
                buffer[out++] = values[b++];
            }
        }
        values.swap(buffer);
    }
    return inversions;
}

int sign(double v) {
    return (v > 0.0) - (v < 0.0);
}

}  // namespace

KendallCounts kendall_counts(const Ranking& a, const Ranking& b) {
    if (a.size() != b.size()) {
        throw ConfigError("kendall_tau: rankings have different lengths (" +
                          std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
    const auto m = a.size();
    const auto pos_b = b.positions();
    // walk items in a's order; every descent in b's positions is a discordant pair
    std::vector<std::size_t> seq(m);
    for (std::size_t r = 0; r < m; ++r) {
        seq[r] = pos_b[a[r]];
    }
    const auto discordant = count_inversions(seq);
    const std::uint64_t total = static_cast<std::uint64_t>(m) * (m > 0 ? m - 1 : 0) / 2;
    return {total - discordant, discordant};
}

double kendall_tau(const Ranking& a, const Ranking& b) {
    const auto counts = kendall_counts(a, b);
    const auto total = counts.concordant + counts.discordant;
    if (total == 0) {
        return 1.0;
    }
    return (static_cast<double>(counts.concordant) - static_cast<double>(counts.discordant)) /
           static_cast<double>(total);
}

double label_accuracy(std::span<const double> scores, const ComparisonDataset& dataset,
                      std::span<const double> true_scores) {
    if (true_scores.size() != dataset.num_items()) {
        throw ConfigError("label_accuracy: ground-truth scores missing or of wrong length");
    }
    if (scores.size() != dataset.num_items()) {
        throw ConfigError("label_accuracy: score vector has wrong length");
    }
    double matched = 0.0;
    double total = 0.0;
    for (const auto& e : dataset.entries()) {
        const auto count = static_cast<double>(e.multiplicity);
        total += count;
        const int predicted = sign(scores[e.i] - scores[e.j]);
        const int truth = sign(true_scores[e.i] - true_scores[e.j]);
        if (predicted != 0 && predicted == truth) {
            matched += count;
        }
    }
    return total > 0.0 ? matched / total : 0.0;
}

}  // namespace pdrank
