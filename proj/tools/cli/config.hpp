#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fplap/types.hpp"

namespace fplap::cli {

/// Flat key = value text with [section] headers. '#' and ';' start comments.
/// Every key must be read by the command that consumes the file; check_unused reports the rest.
class IniConfig {
public:
    static IniConfig parse(std::string_view text);
    static IniConfig load(const std::filesystem::path& path);

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    std::string str(const std::string& section, const std::string& key) const;
    std::string str(const std::string& section, const std::string& key, const std::string& fallback) const;
    double num(const std::string& section, const std::string& key) const;
    double num(const std::string& section, const std::string& key, double fallback) const;
    std::optional<double> opt_num(const std::string& section, const std::string& key) const;
    int integer(const std::string& section, const std::string& key, int fallback) const;
    bool boolean(const std::string& section, const std::string& key, bool fallback) const;
    /// Comma-separated numbers.
    std::vector<double> numbers(const std::string& section, const std::string& key) const;
    std::vector<double> numbers(const std::string& section, const std::string& key,
                                const std::vector<double>& fallback) const;
    /// Comma-separated words, whitespace trimmed.
    std::vector<std::string> strings(const std::string& section, const std::string& key) const;
    /// ';'-separated points, components separated by whitespace.
    std::vector<Vec> points(const std::string& section, const std::string& key, int d) const;

    /// Throws ConfigurationError naming the first key nobody read.
    void check_unused() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };
    const Entry& entry(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, Entry>> data_;
};

double parse_number(const std::string& text, const std::string& where);

}  // namespace fplap::cli
