#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace trotter::io {

/// Shortest round-trip representation; identical inputs give identical text.
std::string format_double(double v);

/// Versioned CSV: first line "# schema=<name>", second line the column
/// header, then one row per entry. Missing values become empty fields.
void write_csv(const std::filesystem::path& path, const std::string& schema,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::optional<double>>>& rows);

struct CsvData {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

CsvData read_csv(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace trotter::io
