#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace teamspectra {

// One `key = value` assignment per line; '#' starts a full-line comment;
// blank lines are ignored; duplicate keys are rejected. Values keep their
// inner spacing, so paths and names need no quoting.
class KeyVal {
  public:
    static KeyVal parse(const std::string& text);
    static KeyVal parse_file(const std::filesystem::path& path);

    bool has(const std::string& key) const;

    // Typed accessors throw ConfigError when the key is absent or the value
    // does not parse; the *_or variants fall back instead of throwing on an
    // absent key (a present but malformed value still throws).
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, std::string fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key) const;
    bool get_bool_or(const std::string& key, bool fallback) const;

    // Comma-separated value, each entry trimmed; empty entries dropped.
    std::vector<std::string> get_list(const std::string& key) const;

    // Assignments in file order.
    const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::map<std::string, std::string> by_key_;
};

}  // namespace teamspectra
