#include "lexitune/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lexitune {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
            if (std::find(cfg.sections_.begin(), cfg.sections_.end(), section) ==
                cfg.sections_.end())
                cfg.sections_.push_back(section);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        cfg.items_.push_back({section, key, value});
    }
    return cfg;
}

bool ConfigFile::has_section(const std::string& section) const {
    return std::find(sections_.begin(), sections_.end(), section) != sections_.end();
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return std::any_of(items_.begin(), items_.end(), [&](const Item& i) {
        return i.section == section && i.key == key;
    });
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
    for (const Item& i : items_)
        if (i.section == section && i.key == key) return i.value;
    throw ConfigError("missing config key: [" + section + "] " + key);
}

std::string ConfigFile::get_string_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get_string(section, key);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("config key [" + section + "] " + key + ": '" + v +
                          "' is not a number");
    return out;
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key,
                                 double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key) const {
    const std::string v = get_string(section, key);
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("config key [" + section + "] " + key + ": '" + v +
                          "' is not an integer");
    return out;
}

std::int64_t ConfigFile::get_int_or(const std::string& section, const std::string& key,
                                    std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<std::string> ConfigFile::get_all(const std::string& section,
                                             const std::string& key) const {
    std::vector<std::string> out;
    for (const Item& i : items_)
        if (i.section == section && i.key == key) out.push_back(i.value);
    return out;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
    std::vector<std::string> out;
    for (const Item& i : items_)
        if (i.section == section) out.push_back(i.key);
    return out;
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
    if (std::find(sections_.begin(), sections_.end(), section) == sections_.end())
        sections_.push_back(section);
    for (Item& i : items_) {
        if (i.section == section && i.key == key) {
            i.value = value;
            return;
        }
    }
    items_.push_back({section, key, value});
}

std::vector<std::string> split_tokens(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_fraction_or_percent(const std::string& token) {
    std::string t = token;
    double scale = 1.0;
    if (!t.empty() && t.back() == '%') {
        t.pop_back();
        scale = 0.01;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError("cannot parse fraction '" + token + "'");
    return v * scale;
}

}  // namespace lexitune
