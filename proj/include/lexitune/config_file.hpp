#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lexitune {

// Raised for malformed experiment configuration (bad file, unknown keys,
// unparsable values). The CLI maps it to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat typed key-value file with one [section] per module:
//
//   # comment
//   [section]
//   key = value
//   key = value with spaces
//
// Keys may repeat inside a section (the search-space grammar uses repeated
// `param` lines); lookups keep file order. Section and key names are
// validated by the consumer; values are parsed on demand.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text);

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const;

    // All values of a repeated key, in file order.
    std::vector<std::string> get_all(const std::string& section, const std::string& key) const;

    // Every key present in a section (with repeats), in file order.
    std::vector<std::string> keys(const std::string& section) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

private:
    struct Item {
        std::string section;
        std::string key;
        std::string value;
    };
    std::vector<Item> items_;
    std::vector<std::string> sections_;
};

// Whitespace-separated tokens of a value string.
std::vector<std::string> split_tokens(const std::string& value);

// Parses "1%" -> 0.01 and "0.01" -> 0.01.
double parse_fraction_or_percent(const std::string& token);

}  // namespace lexitune
