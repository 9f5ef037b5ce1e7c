#include "teamspectra/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace teamspectra::csv {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return std::string(buf, ptr);
}

double parse_double(const std::string& field) {
    if (field == "nan") return std::nan("");
    if (field == "inf") return HUGE_VAL;
    if (field == "-inf") return -HUGE_VAL;
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end != begin + field.size() || field.empty() || errno == ERANGE)
        throw std::invalid_argument("not a number: '" + field + "'");
    return v;
}

long long parse_int(const std::string& field) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw std::invalid_argument("not an integer: '" + field + "'");
    return v;
}

std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::out_of_range("no such column: " + name);
}

void Writer::header(const std::vector<std::string>& names) { line(names); }
void Writer::row(const std::vector<std::string>& fields) { line(fields); }

void Writer::numeric_row(const std::vector<double>& values) {
    std::vector<std::string> fields;
    fields.reserve(values.size());
    for (double v : values) fields.push_back(format_double(v));
    line(fields);
}

void Writer::line(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << escape(fields[i]);
    }
    out_ << '\n';
}

namespace {

// One record, honoring quoted fields that may span lines.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field += '"';
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

}  // namespace

Table read(std::istream& in) {
    Table table;
    std::vector<std::string> fields;
    if (read_record(in, fields)) table.header = std::move(fields);
    while (read_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        if (fields.size() != table.header.size())
            throw std::runtime_error("csv row has " + std::to_string(fields.size()) +
                                     " fields, header has " +
                                     std::to_string(table.header.size()));
        table.rows.push_back(std::move(fields));
    }
    return table;
}

Table load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read(in);
}

void save_file(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    Writer w(out);
    w.header(table.header);
    for (const auto& r : table.rows) w.row(r);
}

}  // namespace teamspectra::csv
