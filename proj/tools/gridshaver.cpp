#include "gridshaver/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <regex>

namespace {

namespace cli = gridshaver::cli;
namespace fs = std::filesystem;

// "SxM": S strings in parallel of M modules each.
gridshaver::ArrayTopology parse_topology(const std::string& text) {
    static const std::regex pattern(R"((\d+)[xX](\d+))");
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) throw CLI::ValidationError("--array", "expected SxM, e.g. 13x5");
    return {std::stoi(m[1]), std::stoi(m[2])};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Microgrid simulator: PV arrays, MPPT, switched-inductor boost, HAN peak shaving "
                 "and grid power-flow management"};
    app.require_subcommand(1);

    std::optional<fs::path> out_dir;

    cli::RunOptions run;
    std::optional<std::uint64_t> seed;
    auto* simulate = app.add_subcommand("simulate", "Run one or more scenarios");
    simulate->add_option("--scenario", run.scenario_paths, "Scenario JSON file (repeatable)")->required();
    simulate->add_option("--out", out_dir, "Output directory (default $GRIDSHAVER_OUT)");
    simulate->add_flag("--plots", run.emit_plots, "Also write SVG plots");
    simulate->add_option("--seed", seed, "Override the scenario seed");

    cli::PvCurveOptions curves;
    std::string array_flag;
    auto* pv = app.add_subcommand("pv-curves", "I-V and P-V curves of a fitted two-diode module");
    pv->add_option("--voc", curves.voc, "Open-circuit voltage (V)")->capture_default_str();
    pv->add_option("--isc", curves.isc, "Short-circuit current (A)")->capture_default_str();
    pv->add_option("--vmp", curves.vmp, "MPP voltage (V)")->capture_default_str();
    pv->add_option("--imp", curves.imp, "MPP current (A)")->capture_default_str();
    pv->add_option("--cells", curves.cells, "Cells per module")->capture_default_str();
    pv->add_option("--irradiances", curves.irradiances, "Irradiance list (W/m2)")->delimiter(',');
    pv->add_option("--temperature", curves.temperature, "Cell temperature (degC)")->capture_default_str();
    pv->add_option("--array", array_flag, "Array topology SxM (strings x modules per string)");
    pv->add_option("--points", curves.points, "Points per curve")->capture_default_str();
    pv->add_option("--out", out_dir, "Output directory (default $GRIDSHAVER_OUT)");
    pv->add_flag("--plots", curves.emit_plots, "Also write SVG plots");

    cli::ConverterOptions conv;
    auto* converter = app.add_subcommand("converter", "Switched-inductor boost converter analysis");
    converter->add_option("--duty", conv.duty, "Operating duty cycle")->required();
    converter->add_option("--vg", conv.v_g, "Input voltage (V)")->capture_default_str();
    converter->add_option("--l", conv.params.l, "Inductance (H)")->capture_default_str();
    converter->add_option("--c", conv.params.c, "Capacitance (F)")->capture_default_str();
    converter->add_option("--r", conv.params.r, "Load resistance (ohm)")->capture_default_str();
    converter->add_option("--dt", conv.dt, "Integration step (s)")->capture_default_str();
    converter->add_option("--horizon", conv.horizon_s, "Step-response horizon (s)")->capture_default_str();
    converter->add_flag("--step-response", conv.step_response, "Integrate from rest and write a CSV");
    converter->add_option("--out", out_dir, "Output directory (default $GRIDSHAVER_OUT)");

    fs::path validate_path;
    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("--scenario", validate_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
        if (!array_flag.empty()) curves.topology = parse_topology(array_flag);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : cli::kExitInvalid;
    }

    if (simulate->parsed()) {
        run.output_dir = cli::default_output_dir(out_dir);
        run.seed_override = seed;
        return cli::cmd_simulate(run, std::cout, std::cerr);
    }
    if (pv->parsed()) {
        curves.output_dir = cli::default_output_dir(out_dir);
        return cli::cmd_pv_curves(curves, std::cout, std::cerr);
    }
    if (converter->parsed()) {
        conv.output_dir = cli::default_output_dir(out_dir);
        return cli::cmd_converter(conv, std::cout, std::cerr);
    }
    return cli::cmd_validate(validate_path, std::cout, std::cerr);
}
