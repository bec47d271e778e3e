#include "geophase/cli/table.hpp"

#include "geophase/phases.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

namespace geophase::cli {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

const char* mode_name(const CheckRow& r) {
    switch (r.kind) {
        case CheckRow::Kind::at_most: return "<=";
        case CheckRow::Kind::at_least: return ">=";
        case CheckRow::Kind::match: break;
    }
    return r.relative ? "rel" : "abs";
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";  // folds -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("table row width does not match the header");
    rows.push_back(std::move(row));
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += csv_field(table.columns[c]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            if (const auto* d = std::get_if<double>(&row[c])) {
                out += format_number(*d);
            } else {
                out += csv_field(std::get<std::string>(row[c]));
            }
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Table& table) {
    auto doc = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            const auto& key = table.columns[c];
            if (const auto* d = std::get_if<double>(&row[c])) {
                if (std::isfinite(*d)) {
                    // round-trip through the 12-digit text so CSV and JSON carry the same value
                    const auto text = format_number(*d);
                    double rounded = 0.0;
                    std::from_chars(text.data(), text.data() + text.size(), rounded);
                    obj[key] = rounded;
                } else {
                    obj[key] = nullptr;
                }
            } else {
                obj[key] = std::get<std::string>(row[c]);
            }
        }
        doc.push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename into '" + path.string() + "': " + ec.message());
    }
}

double CheckRow::delta() const {
    return phase ? std::abs(wrap_phase(numeric - closed)) : std::abs(numeric - closed);
}

bool CheckRow::pass() const {
    if (skipped) return true;
    if (!std::isfinite(numeric) || !std::isfinite(closed)) return false;
    switch (kind) {
        case Kind::at_most: return numeric <= closed + tolerance;
        case Kind::at_least: return numeric >= closed - tolerance;
        case Kind::match: break;
    }
    const double scale = relative ? std::abs(closed) : 1.0;
    return delta() <= tolerance * scale;
}

const char* CheckRow::status() const {
    if (skipped) return "SKIP";
    return pass() ? "PASS" : "FAIL";
}

Table checks_table(const std::vector<CheckRow>& rows) {
    Table t;
    t.columns = {"quantity", "closed", "numeric", "delta", "tolerance", "mode", "status"};
    for (const auto& r : rows)
        t.add_row({r.quantity, r.closed, r.numeric, r.delta(), r.tolerance, std::string(mode_name(r)),
                   std::string(r.status())});
    return t;
}

std::string render_checks(const std::vector<CheckRow>& rows) {
    const auto t = checks_table(rows);
    std::vector<std::vector<std::string>> cells;
    cells.push_back(t.columns);
    for (const auto& row : t.rows) {
        std::vector<std::string> line;
        for (const auto& c : row)
            line.push_back(std::holds_alternative<double>(c) ? format_number(std::get<double>(c))
                                                             : std::get<std::string>(c));
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(t.columns.size(), 0);
    for (const auto& line : cells)
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());

    std::ostringstream os;
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            os << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c])) << line[c];
        }
        os << '\n';
    }
    std::string out = os.str();
    // drop trailing padding
    std::string trimmed;
    std::istringstream in(out);
    for (std::string l; std::getline(in, l);) {
        l.erase(l.find_last_not_of(' ') + 1);
        trimmed += l + '\n';
    }
    return trimmed;
}

}  // namespace geophase::cli
