#include "gridshaver/cli.hpp"

#include "gridshaver/engine.hpp"
#include "gridshaver/report.hpp"
#include "gridshaver/scenario.hpp"
#include "gridshaver/svg_chart.hpp"

#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>

namespace gridshaver::cli {

namespace fs = std::filesystem;

fs::path default_output_dir(const std::optional<fs::path>& flag) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
    return "gridshaver-out";
}

namespace {

void plot_run(const RunResult& result, const Scenario& scenario, const fs::path& dir) {
    LineChart::Series demand{"demand", {}, {}};
    LineChart::Series served{"served", {}, {}};
    LineChart::Series pv{"pv_ac", {}, {}};
    LineChart::Series exported{"export", {}, {}};
    LineChart::Series imported{"import", {}, {}};
    bool islanded = false;
    for (const auto& r : result.records) {
        const double hour = (scenario.start_time_s + r.t_s) / 3600.0;
        for (auto* s : {&demand, &served, &pv, &exported, &imported}) s->x.push_back(hour);
        demand.y.push_back(r.demand_kw);
        served.y.push_back(r.served_kw);
        pv.y.push_back(r.pv_ac_kw);
        exported.y.push_back(r.decision.export_kw());
        imported.y.push_back(r.decision.import_kw());
        islanded = islanded || r.isolator == IsolatorState::Open;
    }

    if (islanded) {
        LineChart load;
        load.title = "Load curve";
        load.x_label = "hour of day";
        load.y_label = "kW";
        load.series = {demand, served};
        load.reference_y = scenario.policy.capacity_kw;
        load.reference_label = "capacity";
        load.save(dir / "load_curve.svg");
    }
    LineChart flow;
    flow.title = "Power flow";
    flow.x_label = "hour of day";
    flow.y_label = "kW";
    flow.series = {pv, served, exported, imported};
    flow.save(dir / "power_flow.svg");
}

int simulate_one(const fs::path& scenario_path, const fs::path& dir, const RunOptions& opts,
                 std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        scenario = load_scenario(scenario_path);
    } catch (const ScenarioError& e) {
        err << scenario_path.string() << ": " << e.what() << '\n';
        return kExitInvalid;
    }
    if (opts.seed_override) scenario.seed = *opts.seed_override;

    RunResult result;
    try {
        result = run_scenario(scenario);
    } catch (const Error& e) {
        err << scenario_path.string() << ": simulation failed: " << e.what() << '\n';
        return kExitRuntime;
    }

    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream csv(dir / "timeseries.csv", std::ios::binary);
    std::ofstream summary(dir / "summary.txt", std::ios::binary);
    if (!csv || !summary) {
        err << "cannot write outputs under " << dir.string() << '\n';
        return kExitRuntime;
    }
    write_timeseries_csv(csv, result);
    const RunSummary totals = summarize(result, scenario);
    write_summary(summary, totals);

    if (opts.emit_plots) {
        try {
            plot_run(result, scenario, dir);
        } catch (const std::exception& e) {
            err << "warning: plots skipped: " << e.what() << '\n';
        }
    }
    out << scenario_path.string() << ": " << result.records.size() << " steps, peak served "
        << format_value(totals.peak_served_kw) << " kW, imported "
        << format_value(totals.energy_imported_kwh) << " kWh, exported "
        << format_value(totals.energy_exported_kwh) << " kWh -> " << dir.string() << '\n';
    return kExitOk;
}

}  // namespace

int cmd_simulate(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.scenario_paths.empty()) {
        err << "no scenario given\n";
        return kExitInvalid;
    }
    if (opts.scenario_paths.size() == 1) {
        return simulate_one(opts.scenario_paths.front(), opts.output_dir, opts, out, err);
    }

    struct Outcome {
        int code;
        std::string out;
        std::string err;
    };
    std::vector<std::future<Outcome>> jobs;
    for (const auto& path : opts.scenario_paths) {
        jobs.push_back(std::async(std::launch::async, [&opts, path] {
            std::ostringstream o;
            std::ostringstream e;
            const int code = simulate_one(path, opts.output_dir / path.stem(), opts, o, e);
            return Outcome{code, o.str(), e.str()};
        }));
    }
    int worst = kExitOk;
    for (auto& job : jobs) {
        const Outcome r = job.get();
        out << r.out;
        err << r.err;
        worst = std::max(worst, r.code);
    }
    return worst;
}

int cmd_pv_curves(const PvCurveOptions& opts, std::ostream& out, std::ostream& err) {
    CellParams params;
    try {
        if (opts.topology.strings_parallel < 1 || opts.topology.modules_per_string < 1) {
            throw InvalidSpec("array topology counts must be at least 1");
        }
        for (double g : opts.irradiances) {
            if (!(g > 0.0)) throw InvalidSpec("irradiances must be positive");
        }
        params = fit_two_diode(ModuleSpec::from_datasheet(opts.voc, opts.isc, opts.vmp, opts.imp, opts.cells));
    } catch (const Error& e) {
        err << "invalid module: " << e.what() << '\n';
        return kExitInvalid;
    }

    std::error_code ec;
    fs::create_directories(opts.output_dir, ec);
    LineChart iv{"I-V characteristics", "voltage (V)", "current (A)", {}, std::nullopt, {}};
    LineChart pv{"P-V characteristics", "voltage (V)", "power (W)", {}, std::nullopt, {}};
    try {
        for (double g : opts.irradiances) {
            const Environment env{g, opts.temperature};
            const auto curve = sweep_curve(params, opts.topology, env, opts.points);
            const OperatingPoint mpp = true_mpp(params, opts.topology, env);
            const std::string tag = format_value(g);
            std::ofstream csv(opts.output_dir / ("pv_curve_g" + tag + ".csv"), std::ios::binary);
            if (!csv) {
                err << "cannot write under " << opts.output_dir.string() << '\n';
                return kExitRuntime;
            }
            csv << "v,i,p\n";
            LineChart::Series iv_s{tag + " W/m2", {}, {}};
            LineChart::Series pv_s{tag + " W/m2", {}, {}};
            for (const auto& pt : curve) {
                csv << format_value(pt.v) << ',' << format_value(pt.i) << ',' << format_value(pt.p) << '\n';
                iv_s.x.push_back(pt.v);
                iv_s.y.push_back(pt.i);
                pv_s.x.push_back(pt.v);
                pv_s.y.push_back(pt.p);
            }
            iv.series.push_back(std::move(iv_s));
            pv.series.push_back(std::move(pv_s));
            out << "irradiance_wm2=" << tag << " peak_w=" << format_value(mpp.p)
                << " v_mp=" << format_value(mpp.v) << " i_mp=" << format_value(mpp.i)
                << " v_oc=" << format_value(curve.back().v) << " i_sc=" << format_value(curve.front().i)
                << '\n';
        }
    } catch (const Error& e) {
        err << "curve evaluation failed: " << e.what() << '\n';
        return kExitRuntime;
    }
    if (opts.emit_plots) {
        try {
            iv.save(opts.output_dir / "iv_curves.svg");
            pv.save(opts.output_dir / "pv_curves.svg");
        } catch (const std::exception& e) {
            err << "warning: plots skipped: " << e.what() << '\n';
        }
    }
    return kExitOk;
}

int cmd_converter(const ConverterOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const double gain = sibc_gain(opts.duty);
        const SibcState eq = sibc_equilibrium(opts.v_g, opts.duty, opts.params);
        const auto eig = sibc_eigenvalues(opts.duty, opts.params);
        const SibcInputs u{opts.v_g, 0.0};
        out << "duty: " << format_value(opts.duty) << '\n'
            << "gain: " << format_value(gain) << '\n'
            << "equilibrium_i_l: " << format_value(eq.i_l) << '\n'
            << "equilibrium_v_o: " << format_value(eq.v_o) << '\n'
            << "eigenvalues: " << format_value(eig[0].real()) << (eig[0].imag() < 0 ? "-" : "+")
            << format_value(std::abs(eig[0].imag())) << "j, " << format_value(eig[1].real())
            << (eig[1].imag() < 0 ? "-" : "+") << format_value(std::abs(eig[1].imag())) << "j\n"
            << "max_stable_dt: " << format_value(sibc_max_step(u, opts.duty, opts.params)) << '\n';
        if (!opts.step_response) return kExitOk;

        const int n = static_cast<int>(std::ceil(opts.horizon_s / opts.dt));
        const int stride = std::max(1, n / 2000);
        std::error_code ec;
        fs::create_directories(opts.output_dir, ec);
        const fs::path path = opts.output_dir / "converter_step.csv";
        std::ofstream csv(path, std::ios::binary);
        if (!csv) {
            err << "cannot write " << path.string() << '\n';
            return kExitRuntime;
        }
        csv << "t_s,i_l,v_o\n";
        const SibcState final = integrate_small_signal(
            {}, u, opts.duty, opts.params, opts.dt, n, [&](int k, const SibcState& x) {
                if (k % stride == 0 || k == n) {
                    csv << format_value(k * opts.dt) << ',' << format_value(x.i_l) << ','
                        << format_value(x.v_o) << '\n';
                }
            });
        out << "final_v_o: " << format_value(final.v_o) << '\n'
            << "final_ratio: " << format_value(final.v_o / opts.v_g) << '\n'
            << "step_response: " << path.string() << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "converter analysis failed: " << e.what() << '\n';
        return kExitInvalid;
    }
}

int cmd_validate(const fs::path& scenario_path, std::ostream& out, std::ostream& err) {
    std::vector<Violation> violations;
    try {
        violations = validate_scenario(read_scenario_json(scenario_path));
    } catch (const ScenarioError& e) {
        violations = e.violations();
    }
    out << violations_to_json(violations).dump(2) << '\n';
    for (const auto& v : violations) err << scenario_path.string() << ": " << v.path << ": " << v.message << '\n';
    return violations.empty() ? kExitOk : kExitInvalid;
}

}  // namespace gridshaver::cli
