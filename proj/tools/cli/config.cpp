#include "config.hpp"

#include <cstdlib>
#include <sstream>

#include "fplap/errors.hpp"
#include "fplap/io.hpp"

namespace fplap::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

std::string where(const std::string& section, const std::string& key) {
    return "[" + section + "] " + key;
}

}  // namespace

double parse_number(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0') throw ConfigurationError(where + ": '" + t + "' is not a number");
    return v;
}

IniConfig IniConfig::parse(std::string_view text) {
    IniConfig cfg;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        // ';' separates points inside values, so only a leading ';' is a comment.
        if (line.empty() || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigurationError("config line " + std::to_string(line_no) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            cfg.data_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigurationError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigurationError("config line " + std::to_string(line_no) + ": empty key");
        auto& sec = cfg.data_[section];
        if (sec.count(key))
            throw ConfigurationError("config line " + std::to_string(line_no) + ": duplicate key " +
                                     where(section, key));
        sec[key] = Entry{trim(line.substr(eq + 1)), line_no, false};
    }
    return cfg;
}

IniConfig IniConfig::load(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        throw ConfigurationError(std::string("config: ") + e.what());
    }
    return parse(text);
}

bool IniConfig::has(const std::string& section, const std::string& key) const {
    const auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) > 0;
}

bool IniConfig::has_section(const std::string& section) const { return data_.count(section) > 0; }

const IniConfig::Entry& IniConfig::entry(const std::string& section, const std::string& key) const {
    const auto s = data_.find(section);
    if (s == data_.end() || !s->second.count(key))
        throw ConfigurationError("config: missing required key " + where(section, key));
    const Entry& e = s->second.at(key);
    e.used = true;
    return e;
}

std::string IniConfig::str(const std::string& section, const std::string& key) const {
    return entry(section, key).value;
}

std::string IniConfig::str(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    return has(section, key) ? str(section, key) : fallback;
}

double IniConfig::num(const std::string& section, const std::string& key) const {
    return parse_number(entry(section, key).value, where(section, key));
}

double IniConfig::num(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? num(section, key) : fallback;
}

std::optional<double> IniConfig::opt_num(const std::string& section, const std::string& key) const {
    if (!has(section, key)) return std::nullopt;
    return num(section, key);
}

int IniConfig::integer(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    const double v = num(section, key);
    if (v != static_cast<double>(static_cast<int>(v)))
        throw ConfigurationError(where(section, key) + ": expected an integer");
    return static_cast<int>(v);
}

bool IniConfig::boolean(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = str(section, key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigurationError(where(section, key) + ": expected true or false, got '" + v + "'");
}

std::vector<double> IniConfig::numbers(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split(str(section, key), ','))
        out.push_back(parse_number(item, where(section, key)));
    if (out.empty()) throw ConfigurationError(where(section, key) + ": empty list");
    return out;
}

std::vector<double> IniConfig::numbers(const std::string& section, const std::string& key,
                                       const std::vector<double>& fallback) const {
    return has(section, key) ? numbers(section, key) : fallback;
}

std::vector<std::string> IniConfig::strings(const std::string& section, const std::string& key) const {
    std::vector<std::string> out;
    for (auto& item : split(str(section, key), ','))
        if (!item.empty()) out.push_back(item);
    if (out.empty()) throw ConfigurationError(where(section, key) + ": empty list");
    return out;
}

std::vector<Vec> IniConfig::points(const std::string& section, const std::string& key, int d) const {
    std::vector<Vec> out;
    for (const auto& item : split(str(section, key), ';')) {
        if (item.empty()) continue;
        std::istringstream in(item);
        Vec v{0.0, 0.0, 0.0};
        std::string comp;
        int k = 0;
        while (in >> comp) {
            if (k >= d)
                throw ConfigurationError(where(section, key) + ": point '" + item + "' has more than d = " +
                                         std::to_string(d) + " components");
            v[k++] = parse_number(comp, where(section, key));
        }
        if (k != d)
            throw ConfigurationError(where(section, key) + ": point '" + item + "' needs " +
                                     std::to_string(d) + " components");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigurationError(where(section, key) + ": no points");
    return out;
}

void IniConfig::check_unused() const {
    for (const auto& [section, keys] : data_)
        for (const auto& [key, e] : keys)
            if (!e.used)
                throw ConfigurationError("config line " + std::to_string(e.line) + ": unknown key " +
                                         where(section, key));
}

}  // namespace fplap::cli
