#include "zeroml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "zeroml/errors.hpp"

namespace zeroml {

std::string_view column_type_name(ColumnType t) {
    switch (t) {
        case ColumnType::Numeric: return "numeric";
        case ColumnType::Categorical: return "categorical";
        case ColumnType::Boolean: return "boolean";
    }
    return "?";
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::optional<double> parse_number(std::string_view text) {
    if (text.empty()) return std::nullopt;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;  // from_chars rejects a leading '+'
    double v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string_view trim(std::string_view text) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!text.empty() && ws(text.front())) text.remove_prefix(1);
    while (!text.empty() && ws(text.back())) text.remove_suffix(1);
    return text;
}

std::size_t Column::missing_count() const {
    return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), std::uint8_t{1}));
}

std::string Column::text(std::size_t row) const {
    if (is_missing(row)) return {};
    switch (type) {
        case ColumnType::Numeric: return format_number(numbers[row]);
        case ColumnType::Boolean: return numbers[row] != 0.0 ? "true" : "false";
        case ColumnType::Categorical: return levels[static_cast<std::size_t>(codes[row])];
    }
    return {};
}

Column Column::numeric(std::string name, std::vector<double> values, std::vector<std::uint8_t> missing) {
    Column c;
    c.name = std::move(name);
    c.type = ColumnType::Numeric;
    if (missing.empty()) missing.assign(values.size(), 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (missing[i]) values[i] = 0.0;
    }
    c.numbers = std::move(values);
    c.missing = std::move(missing);
    return c;
}

Column Column::boolean(std::string name, std::vector<bool> values, std::vector<std::uint8_t> missing) {
    Column c;
    c.name = std::move(name);
    c.type = ColumnType::Boolean;
    if (missing.empty()) missing.assign(values.size(), 0);
    c.numbers.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) c.numbers[i] = (!missing[i] && values[i]) ? 1.0 : 0.0;
    c.missing = std::move(missing);
    return c;
}

Column Column::categorical(std::string name, const std::vector<std::optional<std::string>>& values) {
    Column c;
    c.name = std::move(name);
    c.type = ColumnType::Categorical;
    std::unordered_map<std::string, std::int32_t> interned;
    c.codes.reserve(values.size());
    c.missing.reserve(values.size());
    for (const auto& v : values) {
        if (!v) {
            c.codes.push_back(-1);
            c.missing.push_back(1);
            continue;
        }
        auto [it, inserted] = interned.try_emplace(*v, static_cast<std::int32_t>(c.levels.size()));
        if (inserted) c.levels.push_back(*v);
        c.codes.push_back(it->second);
        c.missing.push_back(0);
    }
    return c;
}

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
    n_rows_ = columns_.empty() ? 0 : columns_.front().size();
    std::set<std::string_view> names;
    for (const auto& c : columns_) {
        const bool numeric_storage = c.type != ColumnType::Categorical;
        const std::size_t stored = numeric_storage ? c.numbers.size() : c.codes.size();
        if (c.size() != n_rows_ || stored != n_rows_) {
            throw SchemaError("column '" + c.name + "' has " + std::to_string(c.size()) + " rows, expected " +
                              std::to_string(n_rows_));
        }
        if (!names.insert(c.name).second) throw SchemaError("duplicate column name '" + c.name + "'");
    }
}

const Column* Dataset::find(std::string_view name) const {
    for (const auto& c : columns_) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const Column& Dataset::column(std::string_view name) const {
    const Column* c = find(name);
    if (!c) throw SchemaError("no column named '" + std::string(name) + "'");
    return *c;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
    std::vector<Column> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) {
        Column s;
        s.name = c.name;
        s.type = c.type;
        s.levels = c.levels;
        s.missing.reserve(rows.size());
        for (std::size_t r : rows) s.missing.push_back(c.missing.at(r));
        if (c.type == ColumnType::Categorical) {
            for (std::size_t r : rows) s.codes.push_back(c.codes[r]);
        } else {
            for (std::size_t r : rows) s.numbers.push_back(c.numbers[r]);
        }
        out.push_back(std::move(s));
    }
    Dataset d(std::move(out));
    d.n_rows_ = rows.size();
    return d;
}

Dataset Dataset::without_rows_missing(std::string_view column_name) const {
    const Column& c = column(column_name);
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < n_rows_; ++r) {
        if (!c.is_missing(r)) keep.push_back(r);
    }
    if (keep.size() == n_rows_) return *this;
    return select_rows(keep);
}

namespace {

// Reads one logical CSV record. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& cells, std::size_t record_no) {
    cells.clear();
    int ch = in.get();
    if (ch == EOF) return false;
    std::string cell;
    bool in_quotes = false;
    bool was_quoted = false;
    for (;; ch = in.get()) {
        if (in_quotes) {
            if (ch == EOF) throw CsvError(record_no, "unterminated quoted field");
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get();
                    cell.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(static_cast<char>(ch));
            }
            continue;
        }
        if (ch == EOF || ch == '\n') {
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            cells.push_back(std::move(cell));
            return true;
        }
        if (ch == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
            was_quoted = false;
        } else if (ch == '"') {
            if (was_quoted || !trim(cell).empty()) throw CsvError(record_no, "unexpected quote inside field");
            cell.clear();
            in_quotes = true;
            was_quoted = true;
        } else {
            cell.push_back(static_cast<char>(ch));
        }
    }
}

bool is_blank_record(const std::vector<std::string>& cells) {
    return cells.size() == 1 && trim(cells[0]).empty();
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; };
        if (lower(a[i]) != lower(b[i])) return false;
    }
    return true;
}

Column infer_column(std::string name, const std::vector<std::optional<std::string>>& cells) {
    bool all_numeric = true;
    bool all_boolean = true;
    for (const auto& c : cells) {
        if (!c) continue;
        if (all_numeric && !parse_number(*c)) all_numeric = false;
        if (all_boolean && !iequals(*c, "true") && !iequals(*c, "false")) all_boolean = false;
    }
    std::vector<std::uint8_t> missing(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) missing[i] = cells[i] ? 0 : 1;
    if (all_numeric) {
        std::vector<double> values(cells.size(), 0.0);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i]) values[i] = *parse_number(*cells[i]);
        }
        return Column::numeric(std::move(name), std::move(values), std::move(missing));
    }
    if (all_boolean) {
        std::vector<bool> values(cells.size(), false);
        for (std::size_t i = 0; i < cells.size(); ++i) values[i] = cells[i] && iequals(*cells[i], "true");
        return Column::boolean(std::move(name), std::move(values), std::move(missing));
    }
    return Column::categorical(std::move(name), cells);
}

std::string quote_csv(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos && trim(cell) == cell) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

Dataset parse_csv(std::istream& in) {
    std::vector<std::string> record;
    std::size_t record_no = 1;
    if (!read_record(in, record, record_no) || is_blank_record(record)) {
        throw CsvError(1, "missing header row");
    }
    std::vector<std::string> header;
    std::set<std::string> seen;
    for (const auto& h : record) {
        std::string name(trim(h));
        if (name.empty()) throw CsvError(1, "empty column name");
        if (!seen.insert(name).second) throw CsvError(1, "duplicate column name '" + name + "'");
        header.push_back(std::move(name));
    }

    std::vector<std::vector<std::optional<std::string>>> cells(header.size());
    while (read_record(in, record, ++record_no)) {
        if (is_blank_record(record)) continue;
        if (record.size() != header.size()) {
            throw CsvError(record_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                          std::to_string(record.size()));
        }
        for (std::size_t c = 0; c < header.size(); ++c) {
            std::string_view v = trim(record[c]);
            if (v.empty()) {
                cells[c].emplace_back(std::nullopt);
            } else {
                cells[c].emplace_back(std::string(v));
            }
        }
    }

    std::vector<Column> columns;
    columns.reserve(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) columns.push_back(infer_column(header[c], cells[c]));
    return Dataset(std::move(columns));
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return parse_csv(in);
}

void write_csv(std::ostream& out, const Dataset& d) {
    const auto cols = d.columns();
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << quote_csv(cols[c].name);
    out << '\n';
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << quote_csv(cols[c].text(r));
        out << '\n';
    }
}

Dataset clean(const Dataset& d) {
    std::vector<Column> kept;
    for (const auto& c : d.columns()) {
        const std::size_t n = c.size();
        if (n > 0 && static_cast<double>(c.missing_count()) > kMissingDropFraction * static_cast<double>(n)) {
            continue;
        }
        Column out = c;
        if (c.missing_count() > 0) {
            if (c.type == ColumnType::Numeric) {
                double sum = 0;
                std::size_t present = 0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (!c.is_missing(r)) {
                        sum += c.numbers[r];
                        ++present;
                    }
                }
                const double mean = sum / static_cast<double>(present);
                for (std::size_t r = 0; r < n; ++r) {
                    if (c.is_missing(r)) out.numbers[r] = mean;
                }
            } else {
                // Mode over the textual value; std::map iteration gives the
                // lexicographically smallest winner on ties.
                std::map<std::string, std::size_t> counts;
                for (std::size_t r = 0; r < n; ++r) {
                    if (!c.is_missing(r)) ++counts[c.text(r)];
                }
                auto best = counts.begin();
                for (auto it = counts.begin(); it != counts.end(); ++it) {
                    if (it->second > best->second) best = it;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    if (!c.is_missing(r)) continue;
                    if (c.type == ColumnType::Boolean) {
                        out.numbers[r] = best->first == "true" ? 1.0 : 0.0;
                    } else {
                        auto pos = std::find(c.levels.begin(), c.levels.end(), best->first);
                        out.codes[r] = static_cast<std::int32_t>(pos - c.levels.begin());
                    }
                }
            }
            std::fill(out.missing.begin(), out.missing.end(), std::uint8_t{0});
        }
        kept.push_back(std::move(out));
    }
    if (kept.empty()) throw CleanError("every column would be dropped (more than half missing)");
    return Dataset(std::move(kept));
}

}  // namespace zeroml
