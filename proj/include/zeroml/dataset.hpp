#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zeroml {

enum class ColumnType { Numeric, Categorical, Boolean };

std::string_view column_type_name(ColumnType t);

/// One typed column. Numeric and Boolean cells live in `numbers` (Boolean as
/// 0/1); Categorical cells are codes into `levels`. Missing cells have their
/// bit set in `missing` and hold 0 / code -1.
struct Column {
    std::string name;
    ColumnType type = ColumnType::Numeric;
    std::vector<double> numbers;
    std::vector<std::int32_t> codes;
    std::vector<std::string> levels;
    std::vector<std::uint8_t> missing;

    std::size_t size() const { return missing.size(); }
    bool is_missing(std::size_t row) const { return missing[row] != 0; }
    std::size_t missing_count() const;

    /// Cell rendered as text: category string, "true"/"false", or the
    /// shortest round-trip form of a number. Empty for missing cells.
    std::string text(std::size_t row) const;

    static Column numeric(std::string name, std::vector<double> values, std::vector<std::uint8_t> missing = {});
    static Column boolean(std::string name, std::vector<bool> values, std::vector<std::uint8_t> missing = {});
    /// Interns `values`; empty optional entries are missing.
    static Column categorical(std::string name, const std::vector<std::optional<std::string>>& values);
};

/// Immutable column-oriented table. Transformations return new Datasets.
class Dataset {
public:
    Dataset() = default;
    /// Throws SchemaError if column lengths disagree or names repeat.
    explicit Dataset(std::vector<Column> columns);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return columns_.size(); }
    std::span<const Column> columns() const { return columns_; }

    const Column* find(std::string_view name) const;
    /// Throws SchemaError when absent.
    const Column& column(std::string_view name) const;

    Dataset select_rows(std::span<const std::size_t> rows) const;
    Dataset without_rows_missing(std::string_view column_name) const;

private:
    std::vector<Column> columns_;
    std::size_t n_rows_ = 0;
};

/// Shortest round-trip decimal form of a double ("2", "2.5", "1e+300").
std::string format_number(double value);

/// Whole-string finite number parse.
std::optional<double> parse_number(std::string_view text);

std::string_view trim(std::string_view text);

/// Parses CSV text (comma delimiter, double-quote quoting, header row).
/// Cells are trimmed, empty cells are missing, and each column's type is
/// inferred: Numeric if every present cell is a finite number, Boolean if
/// every present cell is true/false (any case), otherwise Categorical.
Dataset parse_csv(std::istream& in);
Dataset load_csv(const std::filesystem::path& path);

/// Writes a header row plus one row per record, quoting where needed.
void write_csv(std::ostream& out, const Dataset& d);

/// Drops columns with more than half their cells missing, then imputes numeric
/// gaps with the column mean and categorical/boolean gaps with the mode (ties
/// to the lexicographically smallest value). Throws CleanError when nothing is
/// left.
Dataset clean(const Dataset& d);

inline constexpr double kMissingDropFraction = 0.5;

}  // namespace zeroml
