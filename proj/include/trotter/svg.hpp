#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace trotter::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool points_only = false;  // markers instead of a polyline
};

/// Minimal static line/scatter chart writer; log_y clips values <= 0.
void write_chart(const std::filesystem::path& path, const std::string& title,
                 const std::string& x_label, const std::string& y_label,
                 const std::vector<Series>& series, bool log_y = false);

}  // namespace trotter::svg
