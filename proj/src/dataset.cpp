#include "pdrank/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "pdrank/errors.hpp"

namespace pdrank {

namespace {

void validate(std::size_t num_items, std::size_t i, std::size_t j, int label, std::size_t row) {
    const auto where = [row] { return "comparison row " + std::to_string(row) + ": "; };
    if (i >= num_items || j >= num_items) {
        throw DataError(where() + "item index out of range (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") for " + std::to_string(num_items) + " items");
    }
    if (i == j) {
        throw DataError(where() + "item compared with itself (" + std::to_string(i) + ")");
    }
    if (label == 0) {
        throw DataError(where() + "tie label (0) is not supported");
    }
    if (label != 1 && label != -1) {
        throw DataError(where() + "label must be +1 or -1, got " + std::to_string(label));
    }
}

}  // namespace

std::vector<double> SignedRow::to_dense(std::size_t num_items) const {
    std::vector<double> row(num_items, 0.0);
    row[plus] = 1.0;
    row[minus] = -1.0;
    return row;
}

SignedRow signed_row(const Comparison& entry) {
    if (entry.label > 0) {
        return {entry.i, entry.j};
    }
    return {entry.j, entry.i};
}

ComparisonDataset ComparisonDataset::from_entries(std::size_t num_items,
                                                  std::vector<Comparison> entries) {
    for (std::size_t n = 0; n < entries.size(); ++n) {
        const auto& e = entries[n];
        validate(num_items, e.i, e.j, e.label, n);
        if (e.multiplicity == 0) {
            throw DataError("comparison row " + std::to_string(n) + ": multiplicity must be >= 1");
        }
    }
    return {num_items, std::move(entries)};
}

ComparisonDataset ComparisonDataset::from_observations(std::size_t num_items,
                                                       std::span<const Observation> observations) {
    std::vector<Comparison> entries;
    entries.reserve(observations.size());
    for (const auto& o : observations) {
        entries.push_back({o.i, o.j, o.label, 1});
    }
    return from_entries(num_items, std::move(entries));
}

std::uint64_t ComparisonDataset::total_multiplicity() const {
    std::uint64_t total = 0;
    for (const auto& e : entries_) {
        total += e.multiplicity;
    }
    return total;
}

std::vector<double> ComparisonDataset::margins(std::span<const double> x) const {
    std::vector<double> out(entries_.size());
    for (std::size_t n = 0; n < entries_.size(); ++n) {
        out[n] = signed_row(entries_[n]).dot(x);
    }
    return out;
}

ComparisonDataset compress(std::size_t num_items, std::span<const Comparison> raw) {
    // key: (min index, max index, label seen from the min index)
    std::map<std::tuple<std::size_t, std::size_t, int>, std::uint64_t> merged;
    for (std::size_t n = 0; n < raw.size(); ++n) {
        const auto& e = raw[n];
        validate(num_items, e.i, e.j, e.label, n);
        if (e.multiplicity == 0) {
            throw DataError("comparison row " + std::to_string(n) + ": multiplicity must be >= 1");
        }
        const bool swap = e.i > e.j;
        const auto key = swap ? std::tuple{e.j, e.i, -e.label} : std::tuple{e.i, e.j, e.label};
        merged[key] += e.multiplicity;
    }
    std::vector<Comparison> entries;
    entries.reserve(merged.size());
    for (const auto& [key, count] : merged) {
        const auto& [i, j, label] = key;
        entries.push_back({i, j, label, count});
    }
    return ComparisonDataset::from_entries(num_items, std::move(entries));
}

ComparisonDataset compress(std::size_t num_items, std::span<const Observation> raw) {
    std::vector<Comparison> entries;
    entries.reserve(raw.size());
    for (const auto& o : raw) {
        entries.push_back({o.i, o.j, o.label, 1});
    }
    return compress(num_items, std::span<const Comparison>(entries));
}

ComparisonDataset compress(const ComparisonDataset& dataset) {
    return compress(dataset.num_items(), dataset.entries());
}

Ranking::Ranking(std::vector<std::size_t> order) : order_(std::move(order)) {
    std::vector<bool> seen(order_.size(), false);
    for (const auto item : order_) {
        if (item >= order_.size() || seen[item]) {
            throw DataError("ranking is not a permutation of 0.." + std::to_string(order_.size()));
        }
        seen[item] = true;
    }
}

std::vector<std::size_t> Ranking::positions() const {
    std::vector<std::size_t> pos(order_.size());
    for (std::size_t r = 0; r < order_.size(); ++r) {
        pos[order_[r]] = r;
    }
    return pos;
}

Ranking Ranking::reversed() const {
    std::vector<std::size_t> order(order_.rbegin(), order_.rend());
    return Ranking(std::move(order));
}

Ranking scores_to_ranking(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t k = 0; k < scores.size(); ++k) {
        if (std::isnan(scores[k])) {
            throw DataError("score of item " + std::to_string(k) + " is NaN");
        }
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return Ranking(std::move(order));
}

}  // namespace pdrank
