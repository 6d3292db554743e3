#include <random>

#include "doctest.h"
#include "ntnsim/config.hpp"
#include "ntnsim/presets.hpp"
#include "ntnsim/rng.hpp"
#include "ntnsim/sweep.hpp"

using namespace ntnsim;

namespace {

std::string minimal_config() {
    return "satellite.altitude_km = 600\nsim.duration_s = 5\n";
}

}  // namespace

TEST_CASE("parse: minimal config applies defaults") {
    const auto cfg = parse_config(minimal_config());
    CHECK(cfg.satellite.altitude_km == 600.0);
    CHECK(cfg.sim.duration_s == 5.0);
    CHECK(cfg.harq.n == 16);
    CHECK(cfg.transport.kind == TransportKind::Udp);
    CHECK(cfg.numerology_resolved() == 0);   // S band default
    CHECK(cfg.f_c_hz() == doctest::Approx(2.0e9));
}

TEST_CASE("parse: fig4 preset carries the figure parameters") {
    const auto cfg = parse_config(preset_text("fig4"));
    CHECK(cfg.harq.n == 32);
    CHECK(cfg.band.name == BandName::S);
    CHECK(cfg.ues.count == 4);
    CHECK(cfg.transport.rate_mbps == 25.0);
    CHECK(cfg.transport.direction == Direction::Ul);
}

TEST_CASE("parse: empty file lists the required keys") {
    try {
        parse_config("");
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        REQUIRE(ex.issues().size() == 2);
        CHECK(ex.issues()[0].message.find("satellite.altitude_km") != std::string::npos);
        CHECK(ex.issues()[1].message.find("sim.duration_s") != std::string::npos);
    }
}

TEST_CASE("parse: range error names the key and the line") {
    const std::string text = minimal_config() + "harq.n = -1\n";
    try {
        parse_config(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        REQUIRE(ex.issues().size() == 1);
        CHECK(ex.issues()[0].line == 3);
        CHECK(ex.issues()[0].message.find("harq.n") != std::string::npos);
    }
}

TEST_CASE("parse: unknown keys are hard errors with line numbers") {
    const std::string text = minimal_config() + "satellite.mass_kg = 100\n";
    try {
        parse_config(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        REQUIRE(ex.issues().size() == 1);
        CHECK(ex.issues()[0].line == 3);
        CHECK(ex.issues()[0].message.find("satellite.mass_kg") != std::string::npos);
    }
}

TEST_CASE("parse: every bad key is reported, not just the first") {
    const std::string text = "satellite.altitude_km = maybe\nbogus.key = 1\nta.gnss = sometimes\n";
    try {
        parse_config(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        CHECK(ex.issues().size() >= 3);
    }
}

TEST_CASE("parse: comments and blank lines are ignored") {
    const auto cfg = parse_config("# header\n\nsatellite.altitude_km = 600 # inline\n\nsim.duration_s = 5\n");
    CHECK(cfg.satellite.altitude_km == 600.0);
}

TEST_CASE("parse: beam wider than the limb is rejected") {
    const std::string text = minimal_config() + "ues.half_beamwidth_deg = 70\n";
    CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("harq.n accepts off as a disable switch") {
    ScenarioConfig cfg;
    CHECK(config_set_key(cfg, "harq.n", "off").empty());
    CHECK_FALSE(cfg.harq.enabled);
}

TEST_CASE("round trip: parse(serialize(config)) == config") {
    // Every preset survives the round trip.
    for (const auto& id : figure_ids()) {
        const auto cfg = parse_config(preset_text(id));
        CHECK(parse_config(serialize_config(cfg)) == cfg);
    }

    // Randomized configs too.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto pick = [&](std::initializer_list<const char*> options) {
        auto it = options.begin();
        std::advance(it, static_cast<long>(rng() % options.size()));
        return std::string(*it);
    };
    for (int i = 0; i < 50; ++i) {
        ScenarioConfig cfg;
        cfg.satellite.altitude_km = 200.0 + uni(rng) * 40000.0;
        cfg.satellite.gateway_elevation_deg = uni(rng) * 90.0;
        CHECK(config_set_key(cfg, "satellite.payload",
                             pick({"transparent", "regenerative"})).empty());
        CHECK(config_set_key(cfg, "band.name", pick({"S", "L"})).empty());
        cfg.band.bandwidth_mhz = 5.0 + uni(rng) * 95.0;
        cfg.phy.numerology = static_cast<int>(rng() % 6) - 1;  // includes auto
        CHECK(config_set_key(cfg, "duplex.mode", pick({"tdd", "fdd"})).empty());
        cfg.duplex.m_dl = 1 + static_cast<int>(rng() % 100);
        cfg.duplex.n_gp = static_cast<int>(rng() % 200);
        cfg.ta.gnss = rng() % 2 == 0;
        cfg.ta.tolerance_slots = 0.05 + uni(rng) * 4.0;
        cfg.harq.enabled = rng() % 2 == 0;
        cfg.harq.n = 1 + static_cast<int>(rng() % 600);
        cfg.harq.max_retx = static_cast<int>(rng() % 8);
        cfg.harq.processing_slots = static_cast<int>(rng() % 16);
        cfg.channel.bler = uni(rng) * 0.5;
        cfg.channel.margin_db = uni(rng) * 10.0;
        CHECK(config_set_key(cfg, "transport.kind", pick({"udp", "tcp"})).empty());
        CHECK(config_set_key(cfg, "transport.direction", pick({"dl", "ul"})).empty());
        cfg.transport.rate_mbps = 0.1 + uni(rng) * 100.0;
        cfg.transport.packet_bytes = 16 + static_cast<int>(rng() % 1500);
        cfg.transport.start_s = uni(rng) * 2.0;
        cfg.tcp.rto_ms = 50.0 + uni(rng) * 400.0;
        cfg.tcp.rto_adaptive = rng() % 2 == 0;
        cfg.ues.count = 1 + static_cast<int>(rng() % 8);
        CHECK(config_set_key(cfg, "ues.placement", pick({"cell_center", "uniform"})).empty());
        cfg.ues.half_beamwidth_deg = 0.0;  // auto
        cfg.sim.duration_s = 1.0 + uni(rng) * 30.0;
        cfg.sim.seed = rng();
        if (rng() % 2 == 0) cfg.rate_table = {{-5.0, 0.5}, {5.0, 2.0}, {15.0, 4.0}};

        REQUIRE(validate_config(cfg).empty());
        CHECK(parse_config(serialize_config(cfg)) == cfg);
    }
}

TEST_CASE("presets: parsed form is pinned by a golden checksum") {
    // Hash of the canonical serialization; catching accidental preset
    // drift. Update deliberately when a preset changes.
    const auto checksum = [](const std::string& id) {
        return hash_tag(serialize_config(parse_config(preset_text(id))));
    };
    CHECK(checksum("fig2") == 0xa4474a6cd9bba4c7ULL);
    CHECK(checksum("fig3") == 0x6404aa66a173f124ULL);
    CHECK(checksum("fig4") == 0x57267cb324a2e01dULL);
    CHECK(checksum("fig5") == 0x76d6f94fd4a0310bULL);
}

TEST_CASE("unknown figure id lists the valid ones") {
    try {
        preset_text("fig9");
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        CHECK(ex.issues()[0].message.find("fig2") != std::string::npos);
        CHECK(ex.issues()[0].message.find("fig5") != std::string::npos);
    }
}

TEST_CASE("sweep: figure grids expand to the documented row counts") {
    CHECK(expand_sweep(figure_sweep("fig4"), "fig4").size() == 15);
    CHECK(expand_sweep(figure_sweep("fig3"), "fig3").size() == 18);
    CHECK(expand_sweep(figure_sweep("fig2"), "fig2").size() == 6);
    CHECK(expand_sweep(figure_sweep("fig5"), "fig5").size() == 10);
}

TEST_CASE("sweep: single point equals the base config") {
    SweepSpec spec;
    spec.base = parse_config(minimal_config());
    const auto points = expand_sweep(spec, "solo");
    REQUIRE(points.size() == 1);
    CHECK(points[0].config == spec.base);
    CHECK(points[0].scenario_id == "solo");
}

TEST_CASE("sweep: expansion order is deterministic and row-major") {
    SweepSpec spec;
    spec.base = parse_config(minimal_config());
    spec.vary = {{"satellite.altitude_km", {"600", "1200"}},
                 {"harq.n", {"8", "16", "32"}}};
    const auto points = expand_sweep(spec, "grid");
    REQUIRE(points.size() == 6);
    CHECK(points[0].scenario_id == "grid/satellite.altitude_km=600,harq.n=8");
    CHECK(points[1].scenario_id == "grid/satellite.altitude_km=600,harq.n=16");
    CHECK(points[3].scenario_id == "grid/satellite.altitude_km=1200,harq.n=8");
    CHECK(points[5].config.harq.n == 32);
    CHECK(points[5].config.satellite.altitude_km == 1200.0);
}

TEST_CASE("sweep: cap and bad values rejected") {
    SweepSpec spec;
    spec.base = parse_config(minimal_config());
    spec.expansion_cap = 4;
    spec.vary = {{"harq.n", {"1", "2", "3", "4", "5"}}};
    CHECK_THROWS_AS(expand_sweep(spec, "overflow"), ConfigError);

    spec.expansion_cap = 100;
    spec.vary = {{"harq.n", {"not-a-number"}}};
    CHECK_THROWS_AS(expand_sweep(spec, "bad"), ConfigError);

    spec.vary = {{"nope.key", {"1"}}};
    CHECK_THROWS_AS(expand_sweep(spec, "unknown"), ConfigError);
}
