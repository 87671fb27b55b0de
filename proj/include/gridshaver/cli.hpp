#pragma once

#include "gridshaver/power_stage.hpp"
#include "gridshaver/pv_model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

namespace gridshaver::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRuntime = 2;

inline constexpr const char* kOutputEnv = "GRIDSHAVER_OUT";

/// --out if given, else $GRIDSHAVER_OUT, else ./gridshaver-out
std::filesystem::path default_output_dir(const std::optional<std::filesystem::path>& flag);

struct RunOptions {
    std::vector<std::filesystem::path> scenario_paths;
    std::filesystem::path output_dir;
    bool emit_plots = false;
    std::optional<std::uint64_t> seed_override;
};

/// Writes timeseries.csv and summary.txt (plus SVG plots on request). With
/// several scenarios each one gets a subdirectory named after its file and
/// the runs execute concurrently.
int cmd_simulate(const RunOptions& opts, std::ostream& out, std::ostream& err);

struct PvCurveOptions {
    double voc = 64.2;
    double isc = 5.96;
    double vmp = 54.7;
    double imp = 5.58;
    int cells = 96;
    std::vector<double> irradiances{1000.0};
    double temperature = kStcTemperature;
    ArrayTopology topology{1, 1};
    std::size_t points = 200;
    std::filesystem::path output_dir;
    bool emit_plots = false;
};

int cmd_pv_curves(const PvCurveOptions& opts, std::ostream& out, std::ostream& err);

struct ConverterOptions {
    double duty = 0.5;
    double v_g = 273.5;
    SibcParams params;
    bool step_response = false;
    double dt = 10e-6;
    double horizon_s = 0.5;
    std::filesystem::path output_dir;
};

int cmd_converter(const ConverterOptions& opts, std::ostream& out, std::ostream& err);

/// Prints a JSON violation report; exit 0 iff the scenario is clean.
int cmd_validate(const std::filesystem::path& scenario_path, std::ostream& out, std::ostream& err);

}  // namespace gridshaver::cli
