#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "pdrank/dataset.hpp"

namespace pdrank {

/// Dense index <-> external string identifier mapping, in order of first
/// appearance in the input.
class ItemIndex {
public:
    ItemIndex() = default;
    explicit ItemIndex(std::vector<std::string> names);

    /// Index for `name`, registering it if unseen.
    std::size_t intern(const std::string& name);

    [[nodiscard]] std::size_t size() const { return names_.size(); }
    [[nodiscard]] const std::string& name(std::size_t index) const { return names_.at(index); }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }

    /// Names "0", "1", ... for synthetic data.
    static ItemIndex numbered(std::size_t num_items);

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> lookup_;
};

struct LabeledDataset {
    ItemIndex items;
    ComparisonDataset data;  // compressed
};

/// Parses `item_i,item_j,label[,count]` CSV (header mandatory, LF or CRLF).
/// label 1 means item_i ranks above item_j, -1 the opposite. Ties and
/// malformed rows raise DataError naming the line.
[[nodiscard]] LabeledDataset read_comparisons_csv(std::istream& in);
[[nodiscard]] LabeledDataset read_comparisons_csv(const std::filesystem::path& path);

/// Writes the four-column form (with `count`). Entries are written as stored.
void write_comparisons_csv(std::ostream& out, const ComparisonDataset& data, const ItemIndex& items);
void write_comparisons_csv(const std::filesystem::path& path, const ComparisonDataset& data,
                           const ItemIndex& items);

/// Splits one CSV line on commas and trims surrounding blanks and a trailing CR.
[[nodiscard]] std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace pdrank
