#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pathhd {

enum class ColumnType { Text, Integer, Real, Probability };

struct Column {
    std::string name;
    ColumnType type = ColumnType::Real;
    bool nullable = false;  // Real/Probability only: NaN is written as "NA"
};

using Cell = std::variant<std::string, std::int64_t, double>;

// A typed experiment table plus the metadata written to its sidecar file.
class Table {
public:
    explicit Table(std::vector<Column> columns);

    const std::vector<Column>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
    std::size_t num_rows() const noexcept { return rows_.size(); }

    void add_row(std::vector<Cell> row);
    const Cell& at(std::size_t row, std::string_view column) const;
    double real(std::size_t row, std::string_view column) const;

    // Sidecar entries, in insertion order.
    void set_meta(std::string key, Cell value);
    const std::vector<std::pair<std::string, Cell>>& meta() const noexcept { return meta_; }

    // Throws ConfigError describing the first cell that violates its column
    // type: wrong alternative, non-finite Real, Probability outside [0, 1],
    // NaN in a non-nullable column, or a tab/newline inside Text.
    void validate() const;

    // Header row plus one line per row, tab-separated. Validates first.
    void write_tsv(std::ostream& out) const;
    // {"experiment", "created_utc", "columns": [...], "meta": {...}}
    void write_sidecar(std::ostream& out, std::string_view experiment, std::string_view created_utc) const;

private:
    std::size_t column_index(std::string_view name) const;

    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, Cell>> meta_;
};

struct WrittenTable {
    std::filesystem::path tsv;
    std::filesystem::path sidecar;
};

// Writes <dir>/<experiment>_<YYYYmmddTHHMMSSZ>.tsv and the matching .json.
// Never overwrites: a numeric suffix is added on collision. Throws IoError.
WrittenTable write_table(const std::filesystem::path& dir, std::string_view experiment, const Table& table);

}  // namespace pathhd
