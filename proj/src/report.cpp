#include "pdrank/report.hpp"

#include <map>
#include <utility>

#include "pdrank/errors.hpp"

namespace pdrank {

ConfidenceReport confidence_report(const PDRankResult& result, const ComparisonDataset& dataset,
                                   std::optional<std::span<const double>> true_scores) {
    if (result.confidence.size() != dataset.size()) {
        throw ConfigError("confidence report: result does not belong to this dataset");
    }
    if (true_scores && true_scores->size() != dataset.num_items()) {
        throw ConfigError("confidence report: ground truth has wrong length");
    }
    ConfidenceReport report;
    report.has_truth = true_scores.has_value();
    const auto entries = dataset.entries();

    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::uint64_t, std::uint64_t>> per_pair;
    for (std::size_t n = 0; n < entries.size(); ++n) {
        const auto& e = entries[n];
        ConfidenceRow row{e.i, e.j, e.label, e.multiplicity, result.confidence[n], {}, {}};
        if (true_scores) {
            const auto row_dir = signed_row(e);
            const bool correct = (*true_scores)[row_dir.plus] > (*true_scores)[row_dir.minus];
            row.correct = correct;
            auto& [good, total] = per_pair[{std::min(e.i, e.j), std::max(e.i, e.j)}];
            good += correct ? e.multiplicity : 0;
            total += e.multiplicity;
        }
        report.rows.push_back(row);
    }
    if (true_scores) {
        for (auto& row : report.rows) {
            const auto& [good, total] = per_pair.at({std::min(row.i, row.j), std::max(row.i, row.j)});
            row.pair_correct_ratio = static_cast<double>(good) / static_cast<double>(total);
        }
    }
    return report;
}

void write_confidence_csv(std::ostream& out, const ConfidenceReport& report, const ItemIndex& items) {
    out << "item_i,item_j,label,count,omega";
    if (report.has_truth) {
        out << ",correct,pair_correct_ratio";
    }
    out << '\n';
    out.precision(17);
    for (const auto& row : report.rows) {
        out << items.name(row.i) << ',' << items.name(row.j) << ',' << row.label << ','
            << row.multiplicity << ',' << row.omega;
        if (report.has_truth) {
            out << ',' << (row.correct.value_or(false) ? 1 : 0) << ','
                << row.pair_correct_ratio.value_or(0.0);
        }
        out << '\n';
    }
}

nlohmann::json confidence_to_json(const ConfidenceReport& report, const ItemIndex& items) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r{{"item_i", items.name(row.i)},
                         {"item_j", items.name(row.j)},
                         {"label", row.label},
                         {"count", row.multiplicity},
                         {"omega", row.omega}};
        if (report.has_truth) {
            r["correct"] = row.correct.value_or(false);
            r["pair_correct_ratio"] = row.pair_correct_ratio.value_or(0.0);
        }
        rows.push_back(std::move(r));
    }
    return {{"schema_version", 1}, {"has_truth", report.has_truth}, {"rows", std::move(rows)}};
}

void write_scores_csv(std::ostream& out, std::span<const double> scores, const Ranking& ranking,
                      const ItemIndex& items) {
    out << "item,score,rank\n";
    out.precision(17);
    for (std::size_t r = 0; r < ranking.size(); ++r) {
        const auto item = ranking[r];
        out << items.name(item) << ',' << scores[item] << ',' << (r + 1) << '\n';
    }
}

}  // namespace pdrank
