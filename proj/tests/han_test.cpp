#include "oracles.hpp"

#include "gridshaver/errors.hpp"
#include "gridshaver/han.hpp"

#include <doctest.h>

#include <random>

using namespace gridshaver;

namespace {

Load make_load(std::string id, std::string home, Tier tier, double kw, Profile profile) {
    return Load{std::move(id), std::move(home), tier, Phase::Single, kw, std::move(profile)};
}

Han small_han() {
    const Profile ramp({{0.0, 0.0}, {100.0, 1.0}});
    return Han({Home{"a", {make_load("a1", "a", Tier::Tier1, 4.0, Profile::constant(0.5)),
                           make_load("a3", "a", Tier::Tier3, 6.0, ramp)}},
                Home{"b", {make_load("b2", "b", Tier::Tier2, 3.0, Profile::constant(1.0)),
                           make_load("b3", "b", Tier::Tier3, 2.0, Profile::constant(0.25)),
                           make_load("b3x", "b", Tier::Tier3, 1.0, ramp)}}});
}

}  // namespace

TEST_CASE("profile interpolation") {
    const Profile p({{0.0, 0.0}, {10.0, 1.0}, {20.0, 0.5}});
    CHECK(p.at(-5.0) == 0.0);
    CHECK(p.at(5.0) == doctest::Approx(0.5));
    CHECK(p.at(15.0) == doctest::Approx(0.75));
    CHECK(p.at(25.0) == 0.5);
    CHECK(p.covers(0.0, 20.0));
    CHECK_FALSE(p.covers(0.0, 20.5));
    CHECK_THROWS_AS(Profile({{0.0, 1.0}, {0.0, 2.0}}), DomainError);
    CHECK_THROWS_AS(Profile(std::vector<std::pair<double, double>>{}), DomainError);
}

TEST_CASE("aggregate demand") {
    CHECK(aggregate_demand(Han{}, 0.0) == 0.0);
    const Han han = small_han();
    CHECK(aggregate_demand(han, 50.0) == doctest::Approx(2.0 + 3.0 + 3.0 + 0.5 + 0.5));

    LoadIdSet tier3;
    double tier3_draw = 0.0;
    for (const Load* l : han.loads_in(Tier::Tier3)) {
        tier3.insert(l->id);
        tier3_draw += l->draw_kw(50.0);
    }
    CHECK(aggregate_demand(han, 50.0) - aggregate_demand(han, 50.0, tier3) ==
          doctest::Approx(tier3_draw).epsilon(1e-14));
    CHECK_THROWS_AS(aggregate_demand(han, 50.0, {"nope"}), UnknownLoadId);
}

TEST_CASE("demand is additive and shedding never adds") {
    const Han han = small_han();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> t(0.0, 120.0);
    std::vector<std::string> ids{"a1", "a3", "b2", "b3", "b3x"};
    for (int k = 0; k < 200; ++k) {
        const double when = t(rng);
        double sum = 0.0;
        for (const auto& home : han.homes()) sum += home_demand(home, when);
        CHECK(aggregate_demand(han, when) == doctest::Approx(sum).epsilon(1e-14));

        LoadIdSet shed;
        double prev = aggregate_demand(han, when);
        for (const auto& id : ids) {
            if (rng() % 2) continue;
            shed.insert(id);
            const double now = aggregate_demand(han, when, shed);
            CHECK(now <= prev + 1e-12);
            prev = now;
        }
    }
}

TEST_CASE("tiers partition the loads") {
    const Han han = small_han();
    std::size_t total = 0;
    LoadIdSet seen;
    for (Tier tier : {Tier::Tier1, Tier::Tier2, Tier::Tier3}) {
        for (const Load* l : han.loads_in(tier)) {
            CHECK(l->tier == tier);
            CHECK(seen.insert(l->id).second);
            ++total;
        }
    }
    CHECK(total == han.load_count());
}

TEST_CASE("load index") {
    const Han han = small_han();
    CHECK(han.load("b3").home_id == "b");
    CHECK_THROWS_AS(han.load("zz"), UnknownLoadId);
    try {
        Han({Home{"h1", {make_load("dup", "h1", Tier::Tier1, 1.0, Profile::constant(1.0))}},
             Home{"h2", {make_load("dup", "h2", Tier::Tier3, 1.0, Profile::constant(1.0))}}});
        FAIL("duplicate id accepted");
    } catch (const DomainError& e) {
        const std::string what = e.what();
        CHECK(what.find("h1") != std::string::npos);
        CHECK(what.find("h2") != std::string::npos);
    }
    CHECK_THROWS_AS(Han({Home{"h", {make_load("x", "h", Tier::Tier1, 0.0, Profile::constant(1.0))}}}),
                    DomainError);
}

TEST_CASE("meter readings") {
    const Home idle{"idle", {make_load("i1", "idle", Tier::Tier1, 5.0, Profile::constant(0.0))}};
    CHECK(meter_sample(idle, 0.0, 60.0).active_kw == 0.0);

    const Home h{"h", {make_load("x", "h", Tier::Tier1, 12.3456, Profile::constant(1.0))}};
    const MeterReading r = meter_sample(h, 120.0, 60.0);
    CHECK(r.active_kw == doctest::Approx(12.35).epsilon(1e-12));
    CHECK(r.meter_id == "h");
    CHECK(r.timestamp == 120.0);
    CHECK(quantize_kw(0.005) == doctest::Approx(0.01));
    CHECK(quantize_kw(0.0049) == 0.0);
    CHECK_THROWS_AS(meter_sample(h, 90.0, 60.0), DomainError);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> kw(0.0, 200.0);
    for (int k = 0; k < 10000; ++k) {
        const double x = kw(rng);
        CHECK(std::abs(quantize_kw(x) - x) < 0.005);
    }
}

TEST_CASE("peak-day fixture exceeds capacity only around midday") {
    const Scenario s = oracle::load("peak_day");
    CHECK(s.han.homes().size() == 4);
    double peak = 0.0;
    for (double t = 0.0; t <= s.duration_s; t += 60.0) {
        const double hour = (s.start_time_s + t) / 3600.0;
        const double d = aggregate_demand(s.han, t);
        peak = std::max(peak, d);
        if (d > 100.0) {
            CHECK(hour > 11.0);
            CHECK(hour < 13.0);
        }
    }
    CHECK(peak == doctest::Approx(110.0).epsilon(0.01));
}
