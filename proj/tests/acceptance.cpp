// Acceptance checks. One line per criterion; exit status is the number of
// failures.

#include "oracles.hpp"

#include "gridshaver/mppt.hpp"
#include "gridshaver/power_stage.hpp"
#include "gridshaver/report.hpp"
#include "gridshaver/scu.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace gridshaver;

namespace {

// Tolerances.
constexpr double kArrayPeakMinW = 19400.0;
constexpr double kArrayPeakMaxW = 20200.0;
constexpr double kRatingRuntimeS = 1.0;
constexpr double kAnchorCurrentRel = 0.005;
constexpr double kAnchorPowerRel = 0.01;
constexpr double kRatedModuleW = 305.2;
constexpr double kTrackPowerRel = 0.01;
constexpr int kTrackStepLimit = 500;
constexpr double kGainSettleRel = 0.005;
constexpr double kGainAlgebraicRel = 1e-9;
constexpr double kCapacityKw = 100.0;
constexpr double kTier3PeakMinKw = 15.0;
constexpr double kPeakShavingRuntimeS = 5.0;
constexpr double kSunnyExportMinKw = 12.0;
constexpr double kSunnyExportMaxKw = 35.0;
constexpr double kCloudyImportMinKw = 75.0;
constexpr double kCloudyImportMaxKw = 90.0;
constexpr double kBalanceKw = 1e-6;
constexpr int kOracleTrials = 20000;
constexpr std::size_t kOracleMaxLoads = 8;

const ModuleSpec kModule = ModuleSpec::from_datasheet(64.2, 5.96, 54.7, 5.58, 96);
const ArrayTopology kArray{13, 5};
const char* const kFixtures[] = {"peak_day", "sunny_day", "cloudy_day", "day_night"};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Verdict array_rating() {
    const auto t0 = Clock::now();
    const CellParams p = fit_two_diode(kModule);
    double peak = 0.0;
    for (const auto& pt : sweep_curve(p, kArray, Environment::stc(), 2000)) peak = std::max(peak, pt.p);
    const double elapsed = seconds_since(t0);
    return {peak >= kArrayPeakMinW && peak <= kArrayPeakMaxW && elapsed < kRatingRuntimeS,
            "sweep peak " + fmt("%.1f W", peak) + ", " + fmt("%.3f s", elapsed)};
}

Verdict datasheet_anchors() {
    const CellParams p = fit_two_diode(kModule);
    const double i0 = oracle::module_current(p, 0.0);
    const double ioc = oracle::module_current(p, kModule.v_oc);
    const double pmp = kModule.v_mp * oracle::module_current(p, kModule.v_mp);
    const bool ok = std::abs(i0 - kModule.i_sc) <= kAnchorCurrentRel * kModule.i_sc &&
                    std::abs(ioc) <= kAnchorCurrentRel * kModule.i_sc &&
                    std::abs(pmp - kRatedModuleW) <= kAnchorPowerRel * kRatedModuleW;
    return {ok, fmt("I(0)=%.4f A", i0) + fmt(", I(Voc)=%.2e A", ioc) + fmt(", P(Vmp)=%.2f W", pmp)};
}

Verdict mppt_tracking() {
    const CellParams p = fit_two_diode(kModule);
    const MpptConfig cfg;
    Verdict v;
    auto excursion = [&](const TrackResult& r, const Environment& env) {
        const CellParams pe = apply_environment(p, env);
        const double voc = open_circuit_voltage(pe);
        MpptState s = r.state;
        double lo = s.duty, hi = s.duty;
        for (int k = 0; k < 200; ++k) {
            const OperatingPoint pt = plant_point(pe, kArray, 500.0, s.duty, voc);
            s = ic_step(s, pt.v, pt.i, cfg).state;
            lo = std::min(lo, s.duty);
            hi = std::max(hi, s.duty);
        }
        return hi - lo;
    };
    for (double g : {250.0, 600.0, 1000.0}) {
        const Environment env{g, 25.0};
        const TrackResult r = track_quasi_static(p, kArray, env, cfg);
        const double ratio = r.point.p / true_mpp(p, kArray, env).p;
        const double swing = excursion(r, env);
        v.pass = v.pass && r.settled && r.steps <= kTrackStepLimit && ratio >= 1.0 - kTrackPowerRel &&
                 swing <= cfg.base_step;
        v.detail += fmt("G=%.0f: ", g) + fmt("%.5f of MPP", ratio) + fmt(" in %.0f steps", r.steps) +
                    fmt(", swing %.1e; ", swing);
    }
    const TrackResult bright = track_quasi_static(p, kArray, Environment::stc(), cfg);
    const Environment dim{600.0, 25.0};
    const TrackResult after = track_quasi_static(p, kArray, dim, cfg, 500.0, bright.state);
    const double ratio = after.point.p / true_mpp(p, kArray, dim).p;
    v.pass = v.pass && after.settled && ratio >= 1.0 - kTrackPowerRel;
    v.detail += fmt("1000->600: %.5f of MPP", ratio);
    return v;
}

Verdict converter_consistency() {
    const SibcParams p;
    const double vg = 100.0;
    double worst_settle = 0.0, worst_eq = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const double d = 0.1 * k;
        const double gain = (1 + d) / (1 - d);
        const SibcState x = integrate_small_signal({}, {vg, 0.0}, d, p, 1e-4, 20000);
        worst_settle = std::max(worst_settle, std::abs(x.v_o / vg - gain) / gain);
        const SibcState eq = sibc_equilibrium(vg, d, p);
        const SibcState dx = small_signal_derivative(eq, {vg, 0.0}, d, p);
        const double scale = eq.v_o / p.l;
        worst_eq = std::max({worst_eq, std::abs(eq.v_o / vg - gain) / gain, std::abs(dx.i_l) / scale,
                             std::abs(dx.v_o) / scale});
    }
    return {worst_settle <= kGainSettleRel && worst_eq <= kGainAlgebraicRel,
            fmt("worst settled error %.2e", worst_settle) + fmt(", equilibrium %.2e", worst_eq)};
}

Verdict peak_shaving() {
    Scenario s = oracle::load("peak_day");
    double peak_demand = 0.0, tier3_at_peak = 0.0;
    for (double t = 0.0; t <= s.duration_s; t += s.dt_s) {
        const double d = aggregate_demand(s.han, t);
        if (d > peak_demand) {
            peak_demand = d;
            tier3_at_peak = 0.0;
            for (const Load* l : s.han.loads_in(Tier::Tier3)) tier3_at_peak += l->draw_kw(t);
        }
    }

    const auto t0 = Clock::now();
    const RunResult with = run_scenario(s);
    const double elapsed = seconds_since(t0);
    double max_served = 0.0;
    bool only_tier3 = true;
    for (const auto& r : with.records) {
        max_served = std::max(max_served, r.served_kw);
        for (const auto& id : r.shed_ids) only_tier3 = only_tier3 && s.han.load(id).tier == Tier::Tier3;
    }
    const bool restored = with.records.back().shed_ids.empty();

    s.scu_enabled = false;
    bool over_in_window = false, over_outside = false;
    for (const auto& r : run_scenario(s).records) {
        const double hour = (s.start_time_s + r.t_s) / 3600.0;
        if (r.served_kw > kCapacityKw) (hour >= 11.0 && hour <= 13.0 ? over_in_window : over_outside) = true;
    }
    const bool ok = tier3_at_peak >= kTier3PeakMinKw && max_served <= kCapacityKw && only_tier3 && restored &&
                    with.shed_events > 0 && over_in_window && !over_outside && elapsed < kPeakShavingRuntimeS;
    return {ok, fmt("demand peak %.2f kW", peak_demand) + fmt(" (Tier-3 %.1f kW)", tier3_at_peak) +
                    fmt(", served max %.2f kW", max_served) + fmt(", %.0f sheds", with.shed_events) +
                    (restored ? ", all restored" : ", NOT restored") +
                    (over_in_window ? ", unshaved run overloads at midday" : ", unshaved run never overloads") +
                    fmt(", %.3f s", elapsed)};
}

Verdict sunny_day() {
    double lo = 1e9, hi = -1e9, max_import = 0.0;
    for (const auto& r : run_scenario(oracle::load("sunny_day")).records) {
        lo = std::min(lo, oracle::export_kw(r));
        hi = std::max(hi, oracle::export_kw(r));
        max_import = std::max(max_import, oracle::import_kw(r));
    }
    return {max_import == 0.0 && lo >= kSunnyExportMinKw && hi <= kSunnyExportMaxKw,
            fmt("export %.2f", lo) + fmt("..%.2f kW", hi) + fmt(", max import %.2f kW", max_import)};
}

Verdict cloudy_day() {
    double lo = 1e9, hi = -1e9, max_export = 0.0;
    for (const auto& r : run_scenario(oracle::load("cloudy_day")).records) {
        lo = std::min(lo, oracle::import_kw(r));
        hi = std::max(hi, oracle::import_kw(r));
        max_export = std::max(max_export, oracle::export_kw(r));
    }
    return {max_export == 0.0 && lo >= kCloudyImportMinKw && hi <= kCloudyImportMaxKw,
            fmt("import %.2f", lo) + fmt("..%.2f kW", hi) + fmt(", max export %.2f kW", max_export)};
}

Verdict day_night() {
    const Scenario s = oracle::load("day_night");
    // E: export, M: import with some PV, I: import with no PV
    std::string runs;
    std::string hours;
    for (const auto& r : run_scenario(s).records) {
        char c = 0;
        if (oracle::export_kw(r) > 0.0) c = 'E';
        else if (oracle::import_kw(r) > 0.0) c = r.pv_ac_kw > 0.0 ? 'M' : 'I';
        if (c && (runs.empty() || runs.back() != c)) {
            runs.push_back(c);
            hours += std::string(" ") + c + fmt("@%.2fh", (s.start_time_s + r.t_s) / 3600.0);
        }
    }
    return {runs == "EMI", "decision runs " + runs + " at" + hours};
}

Verdict conservation() {
    double worst = 0.0;
    std::size_t steps = 0;
    for (const char* name : kFixtures) {
        for (const auto& r : run_scenario(oracle::load(name)).records) {
            worst = std::max(worst, oracle::balance_error(r));
            ++steps;
        }
    }
    return {worst <= kBalanceKw, fmt("worst imbalance %.2e kW", worst) + fmt(" over %.0f steps", steps)};
}

Verdict determinism() {
    bool same = true;
    for (const char* name : kFixtures) {
        Scenario s = oracle::load(name);
        s.ami = {1, 0.05, 0};
        std::ostringstream a, b;
        write_timeseries_csv(a, run_scenario(s));
        write_timeseries_csv(b, run_scenario(s));
        same = same && a.str() == b.str();
    }
    return {same, same ? "CSV identical for every fixture" : "CSV differs"};
}

Verdict shed_oracle() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> rated(0.5, 15.0), frac(0.0, 1.0), over(0.0, 60.0);
    int feasible = 0, mismatches = 0;
    for (int trial = 0; trial < kOracleTrials; ++trial) {
        const std::size_t n = 1 + rng() % kOracleMaxLoads;
        std::vector<ShedCandidate> cands;
        std::vector<oracle::Tier3Draw> draws;
        for (std::size_t k = 0; k < n; ++k) {
            const double r = rated(rng);
            const double d = rng() % 6 == 0 ? 0.0 : r * frac(rng);
            cands.push_back({"l" + std::to_string(k), r, d});
            draws.push_back({r, d});
        }
        const double demand = kCapacityKw + over(rng);
        const bool any = oracle::any_feasible_subset(demand, kCapacityKw, draws);
        double projected = demand;
        for (const auto& c : select_shed_prefix(demand, kCapacityKw, cands)) projected -= c.draw_kw;
        if (any) {
            ++feasible;
            if (projected > kCapacityKw) ++mismatches;
        }
    }
    return {mismatches == 0 && feasible > 0,
            fmt("%.0f feasible instances", feasible) + fmt(", %.0f where the prefix failed", mismatches)};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"array rating", array_rating},
        {"datasheet anchors", datasheet_anchors},
        {"MPPT tracking", mppt_tracking},
        {"converter consistency", converter_consistency},
        {"peak shaving", peak_shaving},
        {"sunny-day flow", sunny_day},
        {"cloudy-day flow", cloudy_day},
        {"day/night run", day_night},
        {"conservation", conservation},
        {"determinism", determinism},
        {"shed-set oracle", shed_oracle},
    };
    int failures = 0;
    int n = 0;
    for (const auto& [name, check] : criteria) {
        ++n;
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %2d %-22s %s\n", v.pass ? "PASS" : "FAIL", n, name, v.detail.c_str());
        if (!v.pass) ++failures;
    }
    std::printf("%d/%d criteria passed\n", n - failures, n);
    return failures;
}
