#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fplap {

/// Writes `content` to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Scientific notation with 17 significant digits ("%.16e"); round-trips every double.
std::string format_sci(double value);

/// Header plus rows of a comma-separated file without quoting.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column as doubles ("nan", "inf" accepted). Throws Error on unknown names or bad cells.
    std::vector<double> column(const std::string& name) const;
};

/// Parses text written by the library's CSV emitters. Throws Error on ragged rows.
CsvTable parse_csv(std::string_view text);

}  // namespace fplap
