#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "pdrank/csv_io.hpp"
#include "pdrank/dataset.hpp"
#include "pdrank/reweight.hpp"

namespace pdrank {

struct ConfidenceRow {
    std::size_t i = 0;
    std::size_t j = 0;
    int label = 1;
    std::uint64_t multiplicity = 1;
    double omega = 1.0;
    /// Set only when ground truth is known.
    std::optional<bool> correct;
    /// Correct observations of this unordered pair over all its observations.
    std::optional<double> pair_correct_ratio;
};

struct ConfidenceReport {
    std::vector<ConfidenceRow> rows;
    bool has_truth = false;
};

/// One row per dataset entry with its final weight. With ground-truth scores
/// each row is flagged correct when its label agrees with the true order.
[[nodiscard]] ConfidenceReport confidence_report(
    const PDRankResult& result, const ComparisonDataset& dataset,
    std::optional<std::span<const double>> true_scores = std::nullopt);

/// Columns item_i,item_j,label,count,omega and, with truth, correct,pair_correct_ratio.
void write_confidence_csv(std::ostream& out, const ConfidenceReport& report, const ItemIndex& items);

/// {"schema_version":1,"has_truth":..,"rows":[{"item_i":..,"item_j":..,"label":..,
///  "count":..,"omega":..[,"correct":..,"pair_correct_ratio":..]}]}
[[nodiscard]] nlohmann::json confidence_to_json(const ConfidenceReport& report, const ItemIndex& items);

/// Columns item,score,rank (rank 1 = best), one line per item in rank order.
void write_scores_csv(std::ostream& out, std::span<const double> scores, const Ranking& ranking,
                      const ItemIndex& items);

}  // namespace pdrank
