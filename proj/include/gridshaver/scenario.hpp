#pragma once

#include "gridshaver/engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace gridshaver {

struct Violation {
    std::string path;  // JSON path of the offending value, e.g. "homes[2].loads[0].id"
    std::string message;
};

class ScenarioError : public Error {
public:
    explicit ScenarioError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Every schema and cross-reference problem in a scenario document.
std::vector<Violation> validate_scenario(const nlohmann::json& doc);

/// Builds a Scenario; throws ScenarioError listing every violation.
Scenario parse_scenario(const nlohmann::json& doc);

/// Reads and parses a scenario file. Missing or malformed files surface as
/// ScenarioError naming the path.
nlohmann::json read_scenario_json(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json violations_to_json(const std::vector<Violation>& violations);

}  // namespace gridshaver
