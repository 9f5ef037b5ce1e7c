#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace teamspectra::csv {

// Shortest decimal string that round-trips to the same double ("nan" for
// NaN, "inf"/"-inf" for infinities). Integral values print without a point.
std::string format_double(double value);

double parse_double(const std::string& field);
long long parse_int(const std::string& field);

// RFC 4180 quoting: fields containing a comma, quote, or newline are quoted
// with embedded quotes doubled. Everything else passes through unchanged.
std::string escape(const std::string& field);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws if missing
};

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& fields);

    // Convenience for numeric tables: each double through format_double.
    void numeric_row(const std::vector<double>& values);

private:
    void line(const std::vector<std::string>& fields);
    std::ostream& out_;
};

Table read(std::istream& in);
Table load_file(const std::filesystem::path& path);
void save_file(const std::filesystem::path& path, const Table& table);

}  // namespace teamspectra::csv
