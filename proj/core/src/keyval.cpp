#include "teamspectra/keyval.hpp"

#include <fstream>
#include <sstream>

#include "teamspectra/errors.hpp"

namespace teamspectra {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

KeyVal KeyVal::parse(const std::string& text) {
    KeyVal kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected `key = value`");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (kv.by_key_.contains(key))
            throw ConfigError("line " + std::to_string(line_no) +
                              ": duplicate key '" + key + "'");
        kv.by_key_[key] = value;
        kv.entries_.emplace_back(key, value);
    }
    return kv;
}

KeyVal KeyVal::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open())
        throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

bool KeyVal::has(const std::string& key) const { return by_key_.contains(key); }

const std::string& KeyVal::get(const std::string& key) const {
    const auto it = by_key_.find(key);
    if (it == by_key_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::string KeyVal::get_or(const std::string& key, std::string fallback) const {
    const auto it = by_key_.find(key);
    return it == by_key_.end() ? std::move(fallback) : it->second;
}

long long KeyVal::get_int(const std::string& key) const {
    const std::string& value = get(key);
    try {
        std::size_t consumed = 0;
        const long long parsed = std::stoll(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not an integer: '" +
                          value + "'");
    }
}

long long KeyVal::get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double KeyVal::get_double(const std::string& key) const {
    const std::string& value = get(key);
    try {
        std::size_t consumed = 0;
        const double parsed = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' is not a number: '" + value +
                          "'");
    }
}

double KeyVal::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool KeyVal::get_bool(const std::string& key) const {
    const std::string& value = get(key);
    if (value == "true" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "no" || value == "0") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: '" + value +
                      "'");
}

bool KeyVal::get_bool_or(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

std::vector<std::string> KeyVal::get_list(const std::string& key) const {
    const std::string& value = get(key);
    std::vector<std::string> items;
    std::string::size_type start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const std::string item =
            trim(comma == std::string::npos ? value.substr(start)
                                            : value.substr(start, comma - start));
        if (!item.empty()) items.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

}  // namespace teamspectra
