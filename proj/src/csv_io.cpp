#include "pdrank/csv_io.hpp"

#include <charconv>
#include <fstream>

#include "pdrank/errors.hpp"

namespace pdrank {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
bool parse_number(const std::string& text, T& value) {
    auto begin = text.data();
    const auto end = text.data() + text.size();
    if (begin != end && *begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

ItemIndex::ItemIndex(std::vector<std::string> names) {
    for (auto& n : names) {
        intern(n);
    }
}

std::size_t ItemIndex::intern(const std::string& name) {
    const auto [it, inserted] = lookup_.try_emplace(name, names_.size());
    if (inserted) {
        names_.push_back(name);
    }
    return it->second;
}

ItemIndex ItemIndex::numbered(std::size_t num_items) {
    ItemIndex index;
    for (std::size_t k = 0; k < num_items; ++k) {
        index.intern(std::to_string(k));
    }
    return index;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

LabeledDataset read_comparisons_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    bool has_count = false;
    while (!have_header && std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto header = split_csv_line(line);
        if (header.size() < 3 || header.size() > 4 || header[0] != "item_i" ||
            header[1] != "item_j" || header[2] != "label" ||
            (header.size() == 4 && header[3] != "count")) {
            throw DataError("line " + std::to_string(line_no) +
                            ": expected header 'item_i,item_j,label[,count]'");
        }
        has_count = header.size() == 4;
        have_header = true;
    }
    if (!have_header) {
        throw DataError("comparison CSV is empty (header 'item_i,item_j,label' is mandatory)");
    }

    ItemIndex items;
    std::vector<Comparison> raw;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto where = "line " + std::to_string(line_no) + ": ";
        const auto fields = split_csv_line(line);
        if (fields.size() != (has_count ? 4u : 3u)) {
            throw DataError(where + "expected " + std::to_string(has_count ? 4 : 3) +
                            " fields, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[1].empty()) {
            throw DataError(where + "empty item identifier");
        }
        if (fields[0] == fields[1]) {
            throw DataError(where + "item '" + fields[0] + "' compared with itself");
        }
        int label = 0;
        if (!parse_number(fields[2], label)) {
            throw DataError(where + "label '" + fields[2] + "' is not an integer");
        }
        if (label == 0) {
            throw DataError(where + "tie label (0) is not supported");
        }
        if (label != 1 && label != -1) {
            throw DataError(where + "label must be 1 or -1, got " + fields[2]);
        }
        std::uint64_t count = 1;
        if (has_count && (!parse_number(fields[3], count) || count == 0)) {
            throw DataError(where + "count '" + fields[3] + "' is not a positive integer");
        }
        const auto i = items.intern(fields[0]);
        const auto j = items.intern(fields[1]);
        raw.push_back({i, j, label, count});
    }
    return {items, compress(items.size(), std::span<const Comparison>(raw))};
}

LabeledDataset read_comparisons_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open comparison file '" + path.string() + "'");
    }
    try {
        return read_comparisons_csv(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_comparisons_csv(std::ostream& out, const ComparisonDataset& data,
                           const ItemIndex& items) {
    out << "item_i,item_j,label,count\n";
    for (const auto& e : data.entries()) {
        out << items.name(e.i) << ',' << items.name(e.j) << ',' << e.label << ','
            << e.multiplicity << '\n';
    }
}

void write_comparisons_csv(const std::filesystem::path& path, const ComparisonDataset& data,
                           const ItemIndex& items) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write comparison file '" + path.string() + "'");
    }
    write_comparisons_csv(out, data, items);
    if (!out) {
        throw DataError("write failed for '" + path.string() + "'");
    }
}

}  // namespace pdrank
