#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gridshaver {

/// Minimal SVG line chart for the CLI's plot output.
struct LineChart {
    struct Series {
        std::string name;
        std::vector<double> x;
        std::vector<double> y;
    };

    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::optional<double> reference_y;  // dashed horizontal line, e.g. a capacity limit
    std::string reference_label;

    void render(std::ostream& out) const;
    /// Throws std::runtime_error when the file cannot be written.
    void save(const std::filesystem::path& path) const;
};

}  // namespace gridshaver
