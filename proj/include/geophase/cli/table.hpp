// table.hpp — locale-independent number formatting, CSV/JSON row output and the verify table.

#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace geophase::cli {

// 12 significant digits, '.' decimal separator; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double value);

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

// Header row plus one line per row.
std::string to_csv(const Table& table);
// Array of row objects keyed by column name; non-finite numbers become null.
std::string to_json(const Table& table);

// Writes to a temporary file next to `path` and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& content);

struct CheckRow {
    std::string quantity;
    double closed{0.0};
    double numeric{0.0};
    double tolerance{0.0};
    bool relative{false};  // tolerance applies to |delta| / |closed|
    bool phase{false};     // delta taken modulo 2 pi
    // Set for one-sided checks (numeric <= closed + tolerance, or >= closed - tolerance).
    enum class Kind { match, at_most, at_least } kind{Kind::match};
    bool skipped{false};  // quantity undefined at this point; reported, never counted as a failure

    double delta() const;
    bool pass() const;
    const char* status() const;
};

// Fixed-width table of (quantity, closed, numeric, |delta|, tolerance, status).
std::string render_checks(const std::vector<CheckRow>& rows);
Table checks_table(const std::vector<CheckRow>& rows);

}  // namespace geophase::cli
