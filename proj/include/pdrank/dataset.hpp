#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pdrank {

/// Dense ranking variable: one real score per item, higher is better.
using RankScores = std::vector<double>;

/// One observed pairwise judgment before aggregation. label = +1 asserts
/// item i ranks above item j, label = -1 asserts the opposite.
struct Observation {
    std::size_t i = 0;
    std::size_t j = 0;
    int label = 1;
};

/// A dataset entry: a judgment together with the number of times it was seen.
struct Comparison {
    std::size_t i = 0;
    std::size_t j = 0;
    int label = 1;
    std::uint64_t multiplicity = 1;

    friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// The signed comparison row a_n = y_n c_n. It has +1 at `plus` and -1 at
/// `minus`, i.e. `plus` is the item the label claims is better.
struct SignedRow {
    std::size_t plus = 0;
    std::size_t minus = 0;

    [[nodiscard]] double dot(std::span<const double> x) const { return x[plus] - x[minus]; }
    [[nodiscard]] std::vector<double> to_dense(std::size_t num_items) const;
};

[[nodiscard]] SignedRow signed_row(const Comparison& entry);

/// M items plus a list of signed comparisons with multiplicities.
///
/// Entries are validated on construction (indices in range, i != j, label
/// in {-1,+1}, multiplicity >= 1). A dataset is not necessarily compressed:
/// `from_entries` keeps duplicate rows, which is what the solver sees when
/// fed raw observations. `compress` produces the canonical merged form.
/// Immutable after construction.
class ComparisonDataset {
public:
    ComparisonDataset() = default;

    /// Validates and stores the entries as given (no merging).
    static ComparisonDataset from_entries(std::size_t num_items, std::vector<Comparison> entries);

    /// Every observation becomes its own entry with multiplicity 1.
    static ComparisonDataset from_observations(std::size_t num_items,
                                               std::span<const Observation> observations);

    [[nodiscard]] std::size_t num_items() const { return num_items_; }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] std::span<const Comparison> entries() const { return entries_; }
    [[nodiscard]] const Comparison& operator[](std::size_t n) const { return entries_[n]; }

    /// Sum of multiplicities, i.e. the number of raw observations N.
    [[nodiscard]] std::uint64_t total_multiplicity() const;

    /// a_n^T x for every entry.
    [[nodiscard]] std::vector<double> margins(std::span<const double> x) const;

    friend bool operator==(const ComparisonDataset&, const ComparisonDataset&) = default;

private:
    ComparisonDataset(std::size_t num_items, std::vector<Comparison> entries)
        : num_items_(num_items), entries_(std::move(entries)) {}

    std::size_t num_items_ = 0;
    std::vector<Comparison> entries_;
};

/// Merges coherent judgments of the same pair into one entry with summed
/// multiplicity. Judgments are canonicalised to i < j (flipping the label
/// when the pair is given as (j, i)); opposite-sign judgments of one pair
/// stay separate entries. Output entries are sorted by (i, j, label), so the
/// result does not depend on input order.
///
/// Throws DataError naming the offending row on an invalid index, i == j,
/// or a label outside {-1,+1} (ties are rejected).
[[nodiscard]] ComparisonDataset compress(std::size_t num_items, std::span<const Observation> raw);
[[nodiscard]] ComparisonDataset compress(std::size_t num_items, std::span<const Comparison> raw);
[[nodiscard]] ComparisonDataset compress(const ComparisonDataset& dataset);

/// A permutation of 0..M-1, best item first.
class Ranking {
public:
    Ranking() = default;
    /// Throws DataError if `order` is not a permutation.
    explicit Ranking(std::vector<std::size_t> order);

    [[nodiscard]] std::size_t size() const { return order_.size(); }
    [[nodiscard]] std::span<const std::size_t> order() const { return order_; }
    [[nodiscard]] std::size_t operator[](std::size_t rank) const { return order_[rank]; }
    /// positions()[item] = rank of item (0 = best).
    [[nodiscard]] std::vector<std::size_t> positions() const;
    [[nodiscard]] Ranking reversed() const;

    friend bool operator==(const Ranking&, const Ranking&) = default;

private:
    std::vector<std::size_t> order_;
};

/// Sorts items by descending score; exact ties go to the lower index.
/// Throws DataError on NaN.
[[nodiscard]] Ranking scores_to_ranking(std::span<const double> scores);

}  // namespace pdrank
