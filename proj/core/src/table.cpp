#include "pathhd/table.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "pathhd/error.hpp"

namespace pathhd {

namespace {

std::string_view type_name(ColumnType t) {
    switch (t) {
        case ColumnType::Text: return "text";
        case ColumnType::Integer: return "integer";
        case ColumnType::Real: return "real";
        case ColumnType::Probability: return "probability";
    }
    return "?";
}

std::string format_real(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return format_real(std::get<double>(c));
}

nlohmann::json cell_json(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    const double v = std::get<double>(c);
    if (!std::isfinite(v)) return nullptr;
    return v;
}

std::string utc_stamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

}  // namespace

Table::Table(std::vector<Column> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw ConfigError("table needs at least one column");
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name.empty()) throw ConfigError("table column " + std::to_string(i) + " has no name");
        for (std::size_t j = 0; j < i; ++j) {
            if (columns_[j].name == columns_[i].name) throw ConfigError("duplicate column: " + columns_[i].name);
        }
    }
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
        throw ConfigError("row has " + std::to_string(row.size()) + " cells, table has " +
                          std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(row));
}

std::size_t Table::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == name) return i;
    }
    throw ConfigError("no such column: " + std::string(name));
}

const Cell& Table::at(std::size_t row, std::string_view column) const {
    return rows_.at(row).at(column_index(column));
}

double Table::real(std::size_t row, std::string_view column) const {
    const Cell& c = at(row, column);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&c)) return *d;
    throw ConfigError("column " + std::string(column) + " is not numeric");
}

void Table::set_meta(std::string key, Cell value) {
    for (auto& [k, v] : meta_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    meta_.emplace_back(std::move(key), std::move(value));
}

void Table::validate() const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const auto& row = rows_[r];
        if (row.size() != columns_.size()) throw ConfigError("row " + std::to_string(r) + " has the wrong width");
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            const Column& col = columns_[c];
            const Cell& cell = row[c];
            const std::string where = "row " + std::to_string(r) + ", column " + col.name + ": ";
            switch (col.type) {
                case ColumnType::Text: {
                    const auto* s = std::get_if<std::string>(&cell);
                    if (!s) throw ConfigError(where + "expected text");
                    if (s->find_first_of("\t\r\n") != std::string::npos) {
                        throw ConfigError(where + "text contains a tab or newline");
                    }
                    break;
                }
                case ColumnType::Integer:
                    if (!std::holds_alternative<std::int64_t>(cell)) throw ConfigError(where + "expected integer");
                    break;
                case ColumnType::Real:
                case ColumnType::Probability: {
                    const auto* v = std::get_if<double>(&cell);
                    if (!v) throw ConfigError(where + "expected " + std::string(type_name(col.type)));
                    if (std::isnan(*v)) {
                        if (!col.nullable) throw ConfigError(where + "NaN in a non-nullable column");
                        break;
                    }
                    if (!std::isfinite(*v)) throw ConfigError(where + "non-finite value");
                    if (col.type == ColumnType::Probability && (*v < 0.0 || *v > 1.0)) {
                        throw ConfigError(where + "probability outside [0, 1]");
                    }
                    break;
                }
            }
        }
    }
}

void Table::write_tsv(std::ostream& out) const {
    validate();
    for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "\t" : "") << columns_[c].name;
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "\t" : "") << format_cell(row[c]);
        out << '\n';
    }
}

void Table::write_sidecar(std::ostream& out, std::string_view experiment, std::string_view created_utc) const {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : columns_) {
        cols.push_back({{"name", c.name}, {"type", type_name(c.type)}, {"nullable", c.nullable}});
    }
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : meta_) meta[k] = cell_json(v);
    const nlohmann::json doc = {{"experiment", experiment},
                                {"created_utc", created_utc},
                                {"rows", rows_.size()},
                                {"columns", std::move(cols)},
                                {"meta", std::move(meta)}};
    out << doc.dump(2) << '\n';
}

WrittenTable write_table(const std::filesystem::path& dir, std::string_view experiment, const Table& table) {
    table.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    const std::string stamp = utc_stamp();
    WrittenTable w;
    for (int suffix = 0;; ++suffix) {
        std::string base = std::string(experiment) + "_" + stamp;
        if (suffix > 0) base += "-" + std::to_string(suffix);
        w.tsv = dir / (base + ".tsv");
        w.sidecar = dir / (base + ".json");
        if (!std::filesystem::exists(w.tsv) && !std::filesystem::exists(w.sidecar)) break;
    }
    {
        std::ofstream out(w.tsv, std::ios::binary);
        if (!out) throw IoError("cannot write " + w.tsv.string());
        table.write_tsv(out);
        if (!out) throw IoError("write failed: " + w.tsv.string());
    }
    {
        std::ofstream out(w.sidecar, std::ios::binary);
        if (!out) throw IoError("cannot write " + w.sidecar.string());
        table.write_sidecar(out, experiment, stamp);
        if (!out) throw IoError("write failed: " + w.sidecar.string());
    }
    return w;
}

}  // namespace pathhd
