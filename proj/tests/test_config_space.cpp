#include <catch2/catch_amalgamated.hpp>

#include "lorasim/config_space.hpp"

using namespace lorasim;

TEST_CASE("preset dimensions produce the expected cardinalities") {
    RadioParams radio;
    REQUIRE(ConfigSpace(dimension_preset("config-1"), radio, AirtimeMode::fractional).size() == 30);
    REQUIRE(ConfigSpace(dimension_preset("config-2"), radio, AirtimeMode::fractional).size() == 90);
    REQUIRE(ConfigSpace(dimension_preset("config-3"), radio, AirtimeMode::fractional).size() == 120);
    REQUIRE(ConfigSpace(dimension_preset("config-4"), radio, AirtimeMode::fractional).size() == 360);
    REQUIRE_THROWS_AS(dimension_preset("config-5"), std::invalid_argument);
}

TEST_CASE("indices are sorted by energy with fixed endpoints") {
    RadioParams radio;
    for (const char* preset : {"config-1", "config-2", "config-3", "config-4"}) {
        for (auto mode : {AirtimeMode::fractional, AirtimeMode::semtech}) {
            ConfigSpace space(dimension_preset(preset), radio, mode);
            for (int i = 2; i <= space.size(); ++i)
                REQUIRE(space.energy_at(i) >= space.energy_at(i - 1));
            REQUIRE(space.config_at(1).sf == 7);
            REQUIRE(space.config_at(1).tp_dbm == 2);
            REQUIRE(space.config_at(space.size()).sf == 12);
            REQUIRE(space.config_at(space.size()).tp_dbm == 14);
        }
    }
}

TEST_CASE("equal-energy ties fall back to a fixed lexicographic order") {
    RadioParams radio;
    ConfigSpace space(dimension_preset("config-2"), radio, AirtimeMode::fractional);
    for (int i = 2; i <= space.size(); ++i) {
        if (space.energy_at(i) == space.energy_at(i - 1)) {
            const LoRaConfig& a = space.config_at(i - 1);
            const LoRaConfig& b = space.config_at(i);
            REQUIRE(a.sf == b.sf);
            REQUIRE(a.tp_dbm == b.tp_dbm);
            REQUIRE(a.cf_mhz < b.cf_mhz);
        }
    }
}

TEST_CASE("index_of inverts config_at") {
    RadioParams radio;
    ConfigSpace space(dimension_preset("config-4"), radio, AirtimeMode::semtech);
    for (int i = 1; i <= space.size(); ++i) REQUIRE(space.index_of(space.config_at(i)) == i);
    REQUIRE_THROWS_AS(space.index_of({7, 3, 868.1, {4, 5}, 125000}), std::invalid_argument);
}

TEST_CASE("lookups outside 1..size are rejected") {
    RadioParams radio;
    ConfigSpace space(dimension_preset("config-1"), radio, AirtimeMode::fractional);
    REQUIRE_THROWS_AS(space.config_at(0), std::out_of_range);
    REQUIRE_THROWS_AS(space.config_at(31), std::out_of_range);
    REQUIRE_THROWS_AS(ConfigSpace(ConfigDimensions{{}, {2}, {868.1}, {{4, 5}}, 125000}, radio,
                                  AirtimeMode::fractional),
                      std::invalid_argument);
}

TEST_CASE("cached airtime and energy agree with the single-config functions") {
    RadioParams radio;
    ConfigSpace space(dimension_preset("config-3"), radio, AirtimeMode::fractional);
    double max_toa = 0.0;
    for (int i = 1; i <= space.size(); ++i) {
        const LoRaConfig& cfg = space.config_at(i);
        REQUIRE(space.toa_at(i) == time_on_air_s(cfg, radio, AirtimeMode::fractional));
        REQUIRE(space.energy_at(i) == energy_per_packet_j(cfg, radio, AirtimeMode::fractional));
        max_toa = std::max(max_toa, space.toa_at(i));
    }
    REQUIRE(space.max_toa() == max_toa);
}
