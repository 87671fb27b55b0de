#include "gridshaver/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace gridshaver {

using nlohmann::json;

ScenarioError::ScenarioError(std::vector<Violation> violations)
    : Error([&] {
          std::ostringstream msg;
          msg << "invalid scenario (" << violations.size() << " violation"
              << (violations.size() == 1 ? "" : "s") << ")";
          for (const auto& v : violations) msg << "\n  " << v.path << ": " << v.message;
          return msg.str();
      }()),
      violations_(std::move(violations)) {}

namespace {

const std::set<std::string> kTopLevelKeys = {
    "name",     "description", "duration_s", "dt_s",       "start_time_s",
    "irradiance_points",       "temperature_points",       "homes",
    "mode_schedule",           "pv",         "inverter",   "converter",
    "policy",   "ami",         "seed",       "scu_enabled", "meter_interval_s",
    "mppt",
};

std::string key_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

std::string index_path(const std::string& parent, std::size_t i) {
    return parent + "[" + std::to_string(i) + "]";
}

class Reader {
public:
    std::vector<Violation> violations;

    void fail(const std::string& path, const std::string& message) {
        violations.push_back({path, message});
    }

    const json* child(const json& obj, const std::string& key) {
        if (!obj.is_object()) return nullptr;
        const auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }

    // Numeric field. Missing optional fields yield `fallback`.
    std::optional<double> number(const json& obj, const std::string& parent, const std::string& key,
                                 std::optional<double> fallback = std::nullopt) {
        const std::string path = key_path(parent, key);
        const json* v = child(obj, key);
        if (!v) {
            if (!fallback) fail(path, "required number is missing");
            return fallback;
        }
        if (!v->is_number() || !std::isfinite(v->get<double>())) {
            fail(path, "must be a finite number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    std::optional<double> positive(const json& obj, const std::string& parent,
                                   const std::string& key,
                                   std::optional<double> fallback = std::nullopt) {
        auto v = number(obj, parent, key, fallback);
        if (v && !(*v > 0.0)) {
            fail(key_path(parent, key), "must be positive");
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::int64_t> integer(const json& obj, const std::string& parent,
                                        const std::string& key, std::int64_t min_value,
                                        std::optional<std::int64_t> fallback = std::nullopt) {
        const std::string path = key_path(parent, key);
        const json* v = child(obj, key);
        if (!v) {
            if (!fallback) fail(path, "required integer is missing");
            return fallback;
        }
        if (!v->is_number_integer()) {
            fail(path, "must be an integer");
            return std::nullopt;
        }
        const auto n = v->get<std::int64_t>();
        if (n < min_value) {
            fail(path, "must be at least " + std::to_string(min_value));
            return std::nullopt;
        }
        return n;
    }

    // [[t, value], ...] with strictly increasing t.
    std::optional<Profile> profile(const json& obj, const std::string& parent,
                                   const std::string& key, double duration, double lo, double hi,
                                   bool required) {
        const std::string path = key_path(parent, key);
        const json* v = child(obj, key);
        if (!v) {
            if (required) fail(path, "required profile is missing");
            return std::nullopt;
        }
        if (!v->is_array() || v->empty()) {
            fail(path, "must be a non-empty array of [t_s, value] pairs");
            return std::nullopt;
        }
        std::vector<std::pair<double, double>> points;
        bool ok = true;
        for (std::size_t i = 0; i < v->size(); ++i) {
            const json& pt = (*v)[i];
            if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
                fail(index_path(path, i), "must be a [t_s, value] pair of numbers");
                ok = false;
                continue;
            }
            const double t = pt[0].get<double>();
            const double value = pt[1].get<double>();
            if (!points.empty() && !(t > points.back().first)) {
                fail(index_path(path, i), "breakpoint times must be strictly increasing");
                ok = false;
            }
            if (!(value >= lo && value <= hi)) {
                std::ostringstream msg;
                msg << "value " << value << " outside [" << lo << ", " << hi << "]";
                fail(index_path(path, i), msg.str());
                ok = false;
            }
            points.emplace_back(t, value);
        }
        if (!ok) return std::nullopt;
        if (duration > 0.0 && !(points.front().first <= 0.0 && points.back().first >= duration)) {
            std::ostringstream msg;
            msg << "profile " << path << " is not defined on [0, " << duration << "] (covers ["
                << points.front().first << ", " << points.back().first << "])";
            fail(path, msg.str());
            return std::nullopt;
        }
        return Profile(std::move(points));
    }
};

std::optional<Tier> parse_tier(const json& v) {
    if (!v.is_number_integer()) return std::nullopt;
    switch (v.get<int>()) {
        case 1: return Tier::Tier1;
        case 2: return Tier::Tier2;
        case 3: return Tier::Tier3;
        default: return std::nullopt;
    }
}

struct Parsed {
    Scenario scenario;
    std::vector<Violation> violations;
};

Parsed parse(const json& doc) {
    Reader r;
    Parsed out;
    Scenario& s = out.scenario;
    if (!doc.is_object()) {
        r.fail("$", "scenario must be a JSON object");
        out.violations = std::move(r.violations);
        return out;
    }
    for (const auto& [key, _] : doc.items()) {
        if (!kTopLevelKeys.count(key)) r.fail(key, "unknown key");
    }

    const auto duration = r.positive(doc, "", "duration_s");
    const auto dt = r.positive(doc, "", "dt_s", 60.0);
    const auto start = r.number(doc, "", "start_time_s", 0.0);
    if (duration) s.duration_s = *duration;
    if (dt) s.dt_s = *dt;
    if (start) s.start_time_s = *start;
    if (duration && dt && *dt > *duration) r.fail("dt_s", "must not exceed duration_s");
    const double horizon = duration.value_or(0.0);

    if (auto p = r.profile(doc, "", "irradiance_points", horizon, 0.0, 2000.0, true)) {
        s.irradiance = std::move(*p);
    }
    if (auto p = r.profile(doc, "", "temperature_points", horizon, -40.0, 90.0, false)) {
        s.temperature = std::move(*p);
    }

    // Homes and loads.
    std::vector<Home> homes;
    std::map<std::string, std::string> load_owner;  // load id -> home id
    if (const json* hs = r.child(doc, "homes"); !hs) {
        r.fail("homes", "required array is missing");
    } else if (!hs->is_array()) {
        r.fail("homes", "must be an array");
    } else {
        std::set<std::string> home_ids;
        for (std::size_t h = 0; h < hs->size(); ++h) {
            const json& hj = (*hs)[h];
            const std::string hpath = index_path("homes", h);
            Home home;
            if (const json* id = r.child(hj, "id"); id && id->is_string() && !id->get<std::string>().empty()) {
                home.id = id->get<std::string>();
                if (!home_ids.insert(home.id).second) {
                    r.fail(key_path(hpath, "id"), "duplicate home id " + home.id);
                }
            } else {
                r.fail(key_path(hpath, "id"), "must be a non-empty string");
            }
            const json* ls = r.child(hj, "loads");
            if (!ls || !ls->is_array()) {
                r.fail(key_path(hpath, "loads"), "must be an array");
                continue;
            }
            for (std::size_t l = 0; l < ls->size(); ++l) {
                const json& lj = (*ls)[l];
                const std::string lpath = index_path(key_path(hpath, "loads"), l);
                Load load;
                bool ok = true;
                if (const json* id = r.child(lj, "id"); id && id->is_string() && !id->get<std::string>().empty()) {
                    load.id = id->get<std::string>();
                    const auto [it, inserted] = load_owner.emplace(load.id, home.id);
                    if (!inserted) {
                        r.fail(key_path(lpath, "id"), "duplicate load id " + load.id +
                                                          " in homes " + it->second + " and " +
                                                          home.id);
                        ok = false;
                    }
                } else {
                    r.fail(key_path(lpath, "id"), "must be a non-empty string");
                    ok = false;
                }
                const json* tier = r.child(lj, "tier");
                if (auto t = tier ? parse_tier(*tier) : std::nullopt) {
                    load.tier = *t;
                } else {
                    r.fail(key_path(lpath, "tier"), "must be 1, 2 or 3");
                    ok = false;
                }
                if (const json* ph = r.child(lj, "phase")) {
                    if (ph->is_string() && ph->get<std::string>() == "single") {
                        load.phase = Phase::Single;
                    } else if (ph->is_string() && ph->get<std::string>() == "three") {
                        load.phase = Phase::Three;
                    } else {
                        r.fail(key_path(lpath, "phase"), "must be \"single\" or \"three\"");
                        ok = false;
                    }
                }
                if (auto kw = r.positive(lj, lpath, "rated_kw")) {
                    load.rated_kw = *kw;
                } else {
                    ok = false;
                }
                if (auto p = r.profile(lj, lpath, "profile_points", horizon, 0.0, 1.0, true)) {
                    load.profile = std::move(*p);
                } else {
                    ok = false;
                }
                if (ok) home.loads.push_back(std::move(load));
            }
            homes.push_back(std::move(home));
        }
    }

    // Isolator schedule.
    if (const json* ms = r.child(doc, "mode_schedule")) {
        s.mode_schedule.clear();
        if (!ms->is_array() || ms->empty()) {
            r.fail("mode_schedule", "must be a non-empty array of [t_s, mode] pairs");
        } else {
            for (std::size_t i = 0; i < ms->size(); ++i) {
                const json& e = (*ms)[i];
                const std::string path = index_path("mode_schedule", i);
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_string()) {
                    r.fail(path, "must be a [t_s, \"islanded\"|\"grid\"] pair");
                    continue;
                }
                const double t = e[0].get<double>();
                const std::string mode = e[1].get<std::string>();
                if (mode != "islanded" && mode != "grid") {
                    r.fail(path, "mode must be \"islanded\" or \"grid\"");
                    continue;
                }
                if (!s.mode_schedule.empty() && !(t > s.mode_schedule.back().first)) {
                    r.fail(path, "times must be strictly increasing");
                    continue;
                }
                s.mode_schedule.emplace_back(
                    t, mode == "islanded" ? IsolatorState::Open : IsolatorState::Closed);
            }
            if (!s.mode_schedule.empty() && s.mode_schedule.front().first > 0.0) {
                r.fail("mode_schedule", "first entry must apply at t = 0");
            }
        }
    }

    // PV plant.
    if (const json* pv = r.child(doc, "pv")) {
        if (const json* ms = r.child(*pv, "module_spec")) {
            const auto voc = r.positive(*ms, "pv.module_spec", "voc");
            const auto isc = r.positive(*ms, "pv.module_spec", "isc");
            const auto vmp = r.positive(*ms, "pv.module_spec", "vmp");
            const auto imp = r.positive(*ms, "pv.module_spec", "imp");
            const auto cells = r.integer(*ms, "pv.module_spec", "cells", 1);
            if (voc && isc && vmp && imp && cells) {
                s.pv.module = ModuleSpec::from_datasheet(*voc, *isc, *vmp, *imp, static_cast<int>(*cells));
                if (auto rated = r.positive(*ms, "pv.module_spec", "p_rated", s.pv.module.p_rated)) {
                    s.pv.module.p_rated = *rated;
                }
                try {
                    check_spec(s.pv.module);
                } catch (const InvalidSpec& e) {
                    r.fail("pv.module_spec", e.what());
                }
            }
        }
        if (auto v = r.integer(*pv, "pv", "strings", 1, 13)) s.pv.topology.strings_parallel = static_cast<int>(*v);
        if (auto v = r.integer(*pv, "pv", "modules_per_string", 1, 5)) s.pv.topology.modules_per_string = static_cast<int>(*v);
        if (auto v = r.integer(*pv, "pv", "arrays", 1, 5)) s.pv.arrays = static_cast<int>(*v);
    }

    // Inverter.
    if (const json* inv = r.child(doc, "inverter")) {
        if (const json* preset = r.child(*inv, "preset")) {
            if (preset->is_string() && preset->get<std::string>() == "boost_500v") {
                s.inverter = InverterModel::boost_500v();
            } else if (preset->is_string() && preset->get<std::string>() == "dc_link_250v") {
                s.inverter = InverterModel::dc_link_250v();
            } else {
                r.fail("inverter.preset", "must be \"boost_500v\" or \"dc_link_250v\"");
            }
        }
        if (auto v = r.positive(*inv, "inverter", "efficiency", s.inverter.efficiency)) {
            if (*v > 1.0) {
                r.fail("inverter.efficiency", "must lie in (0, 1]");
            } else {
                s.inverter.efficiency = *v;
            }
        }
        if (auto v = r.positive(*inv, "inverter", "rating_kw", s.inverter.p_rating_kw)) s.inverter.p_rating_kw = *v;
        if (auto v = r.positive(*inv, "inverter", "v_dc_target", s.inverter.v_dc_target)) s.inverter.v_dc_target = *v;
        if (auto v = r.positive(*inv, "inverter", "v_ac_nominal", s.inverter.v_ac_nominal)) s.inverter.v_ac_nominal = *v;
    }

    if (const json* cv = r.child(doc, "converter")) {
        if (auto v = r.positive(*cv, "converter", "l", s.converter.l)) s.converter.l = *v;
        if (auto v = r.positive(*cv, "converter", "c", s.converter.c)) s.converter.c = *v;
        if (auto v = r.positive(*cv, "converter", "r", s.converter.r)) s.converter.r = *v;
    }

    if (const json* mp = r.child(doc, "mppt")) {
        if (auto v = r.number(*mp, "mppt", "d_min", s.mppt.d_min)) s.mppt.d_min = *v;
        if (auto v = r.number(*mp, "mppt", "d_max", s.mppt.d_max)) s.mppt.d_max = *v;
        if (auto v = r.positive(*mp, "mppt", "base_step", s.mppt.base_step)) s.mppt.base_step = *v;
        if (auto v = r.number(*mp, "mppt", "scale_factor", s.mppt.scale_factor)) s.mppt.scale_factor = *v;
        if (auto v = r.positive(*mp, "mppt", "dv_epsilon", s.mppt.dv_epsilon)) s.mppt.dv_epsilon = *v;
        if (auto v = r.number(*mp, "mppt", "max_step_factor", s.mppt.max_step_factor)) s.mppt.max_step_factor = *v;
        if (auto v = r.number(*mp, "mppt", "conductance_tolerance", s.mppt.conductance_tolerance)) {
            s.mppt.conductance_tolerance = *v;
        }
        try {
            check_mppt_config(s.mppt);
        } catch (const Error& e) {
            r.fail("mppt", e.what());
        }
    }

    // Shedding policy.
    double min_shed_s = 900.0;
    if (const json* pol = r.child(doc, "policy")) {
        if (auto v = r.positive(*pol, "policy", "capacity_kw", s.policy.capacity_kw)) s.policy.capacity_kw = *v;
        if (auto v = r.number(*pol, "policy", "restore_margin_kw", s.policy.restore_margin_kw)) {
            if (*v < 0.0) {
                r.fail("policy.restore_margin_kw", "must be non-negative");
            } else {
                s.policy.restore_margin_kw = *v;
            }
        }
        if (auto v = r.number(*pol, "policy", "trigger_margin_kw", s.policy.trigger_margin_kw)) {
            if (*v < 0.0 || *v > s.policy.restore_margin_kw) {
                r.fail("policy.trigger_margin_kw", "must lie in [0, restore_margin_kw]");
            } else {
                s.policy.trigger_margin_kw = *v;
            }
        }
        if (auto v = r.number(*pol, "policy", "min_shed_duration_s", min_shed_s)) {
            if (*v < 0.0) {
                r.fail("policy.min_shed_duration_s", "must be non-negative");
            } else {
                min_shed_s = *v;
            }
        }
    }
    s.policy.min_shed_duration_steps = static_cast<std::int64_t>(std::ceil(min_shed_s / s.dt_s - 1e-9));

    if (const json* ami = r.child(doc, "ami")) {
        if (auto v = r.integer(*ami, "ami", "latency_steps", 0, 0)) s.ami.latency_steps = static_cast<int>(*v);
        if (auto v = r.number(*ami, "ami", "drop_probability", 0.0)) {
            if (*v < 0.0 || *v > 1.0) {
                r.fail("ami.drop_probability", "must lie in [0, 1]");
            } else {
                s.ami.drop_probability = *v;
            }
        }
    }

    if (const json* seed = r.child(doc, "seed")) {
        if (seed->is_number_unsigned()) {
            s.seed = seed->get<std::uint64_t>();
        } else {
            r.fail("seed", "must be a non-negative integer");
        }
    }
    if (const json* en = r.child(doc, "scu_enabled")) {
        if (en->is_boolean()) {
            s.scu_enabled = en->get<bool>();
        } else {
            r.fail("scu_enabled", "must be a boolean");
        }
    }
    if (auto v = r.positive(doc, "", "meter_interval_s", s.meter_interval_s)) {
        s.meter_interval_s = *v;
        const double ratio = *v / s.dt_s;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0 - 1e-9) {
            r.fail("meter_interval_s", "must be a whole multiple of dt_s");
        }
    }

    if (r.violations.empty()) {
        try {
            s.han = Han(std::move(homes));
        } catch (const Error& e) {
            r.fail("homes", e.what());
        }
    }
    out.violations = std::move(r.violations);
    return out;
}

}  // namespace

std::vector<Violation> validate_scenario(const json& doc) { return parse(doc).violations; }

Scenario parse_scenario(const json& doc) {
    Parsed p = parse(doc);
    if (!p.violations.empty()) throw ScenarioError(std::move(p.violations));
    return std::move(p.scenario);
}

json read_scenario_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError({{path.string(), "cannot open scenario file " + path.string()}});
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ScenarioError({{path.string(), std::string("malformed JSON: ") + e.what()}});
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_scenario_json(path));
}

json violations_to_json(const std::vector<Violation>& violations) {
    json list = json::array();
    for (const auto& v : violations) list.push_back({{"path", v.path}, {"message", v.message}});
    return {{"ok", violations.empty()}, {"violations", list}};
}

}  // namespace gridshaver
