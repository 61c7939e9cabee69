#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <numeric>

#include "lorasim/config_space.hpp"
#include "lorasim/phy.hpp"

using namespace lorasim;
using Catch::Matchers::WithinRel;

namespace {

// Exact-rational re-derivation of the airtime pipeline, kept deliberately
// separate from the library's floating-point path.
struct Frac {
    long long num;
    long long den;  // > 0
};

Frac make_frac(long long n, long long d) {
    const long long g = std::gcd(n < 0 ? -n : n, d);
    return {n / (g ? g : 1), d / (g ? g : 1)};
}

Frac add(Frac a, Frac b) { return make_frac(a.num * b.den + b.num * a.den, a.den * b.den); }
Frac mul(Frac a, Frac b) { return make_frac(a.num * b.num, a.den * b.den); }
double to_double(Frac a) { return static_cast<double>(static_cast<long double>(a.num) / a.den); }

long long ceil_div(long long a, long long b) {
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

double oracle_toa(const LoRaConfig& cfg, const RadioParams& radio, AirtimeMode mode) {
    const long long theta =
        8LL * radio.payload_bytes - 4LL * cfg.sf + 16 + 28 - 20LL * radio.header_disabled;
    const long long de = effective_ldro(cfg, radio);
    const long long gamma = cfg.sf - 2 * de;
    Frac extra;
    if (mode == AirtimeMode::fractional) {
        extra = make_frac(ceil_div(theta, gamma) * cfg.cr.den, cfg.cr.num);
    } else {
        extra = make_frac(ceil_div(theta, 4 * gamma) * cfg.cr.den, 1);
    }
    if (extra.num < 0) extra = {0, 1};
    Frac symbols = add(make_frac(17 + 4LL * radio.n_preamble, 4), add(make_frac(8, 1), extra));
    Frac t_sym = make_frac(1LL << cfg.sf, cfg.bw_hz);
    return to_double(mul(symbols, t_sym));
}

}  // namespace

TEST_CASE("frozen single-config values") {
    RadioParams radio;  // 20-byte payload, 8 preamble symbols, explicit header
    LoRaConfig cfg{7, 2, 868.1, {4, 5}, 125000};

    REQUIRE_THAT(symbol_time_s(7, 125000), WithinRel(1.024e-3, 1e-15));
    REQUIRE(payload_bit_budget(20, 7, 0) == 176);
    REQUIRE(payload_bit_budget(20, 12, 0) == 156);
    REQUIRE(payload_bit_budget(20, 7, 1) == 156);

    REQUIRE_THAT(payload_symbols(20, 7, {4, 5}, 0, 0, AirtimeMode::fractional),
                 WithinRel(40.5, 1e-15));
    REQUIRE(payload_symbols(20, 7, {4, 5}, 0, 0, AirtimeMode::semtech) == 43.0);

    REQUIRE_THAT(time_on_air_s(cfg, radio, AirtimeMode::fractional), WithinRel(54.016e-3, 1e-12));
    REQUIRE_THAT(time_on_air_s(cfg, radio, AirtimeMode::semtech), WithinRel(56.576e-3, 1e-12));
}

TEST_CASE("airtime matches the exact-rational oracle on all 360 configs") {
    RadioParams radio;
    const ConfigDimensions dims = dimension_preset("config-4");
    int differing = 0;
    for (int sf : dims.sf)
        for (int tp : dims.tp)
            for (double cf : dims.cf)
                for (CodingRate cr : dims.cr) {
                    LoRaConfig cfg{sf, tp, cf, cr, dims.bw_hz};
                    const double frac = time_on_air_s(cfg, radio, AirtimeMode::fractional);
                    const double semtech = time_on_air_s(cfg, radio, AirtimeMode::semtech);
                    REQUIRE_THAT(frac, WithinRel(oracle_toa(cfg, radio, AirtimeMode::fractional), 1e-12));
                    REQUIRE_THAT(semtech, WithinRel(oracle_toa(cfg, radio, AirtimeMode::semtech), 1e-12));
                    if (frac != semtech) ++differing;
                }
    REQUIRE(differing > 0);
}

TEST_CASE("airtime grows with SF and with heavier coding") {
    RadioParams radio;
    for (auto mode : {AirtimeMode::fractional, AirtimeMode::semtech}) {
        double prev = 0.0;
        for (int sf = 7; sf <= 12; ++sf) {
            LoRaConfig cfg{sf, 14, 868.1, {4, 5}, 125000};
            const double t = time_on_air_s(cfg, radio, mode);
            REQUIRE(t > prev);
            prev = t;
        }
        prev = 0.0;
        for (int den = 5; den <= 8; ++den) {
            LoRaConfig cfg{9, 14, 868.1, {4, den}, 125000};
            const double t = time_on_air_s(cfg, radio, mode);
            REQUIRE(t > prev);
            prev = t;
        }
    }
}

TEST_CASE("low data rate optimization spends bits on robustness") {
    REQUIRE_THAT(payload_symbols(20, 12, {4, 5}, 0, 1, AirtimeMode::fractional),
                 WithinRel(28.0, 1e-15));
    RadioParams radio;
    radio.ldro_auto = true;
    REQUIRE(effective_ldro({11, 14, 868.1, {4, 5}, 125000}, radio) == 1);
    REQUIRE(effective_ldro({10, 14, 868.1, {4, 5}, 125000}, radio) == 0);
    radio.ldro_auto = false;
    REQUIRE(effective_ldro({12, 14, 868.1, {4, 5}, 125000}, radio) == 0);
}

TEST_CASE("energy is radio power times airtime") {
    RadioParams radio;
    LoRaConfig lo{7, 2, 868.1, {4, 5}, 125000};
    LoRaConfig hi{7, 14, 868.1, {4, 5}, 125000};
    const double toa = time_on_air_s(lo, radio, AirtimeMode::fractional);
    REQUIRE_THAT(energy_per_packet_j(lo, radio, AirtimeMode::fractional),
                 WithinRel((0.0165 + 0.0792) * toa, 1e-12));
    const double ratio = energy_per_packet_j(hi, radio, AirtimeMode::fractional) /
                         energy_per_packet_j(lo, radio, AirtimeMode::fractional);
    REQUIRE_THAT(ratio, WithinRel((0.0165 + 0.1485) / (0.0165 + 0.0792), 1e-12));
}

TEST_CASE("receiver tables") {
    REQUIRE(sensitivity_dbm(7, 125000) == -124.0);
    REQUIRE(sensitivity_dbm(12, 125000) == -137.0);
    REQUIRE(required_snr_db(7) == -7.5);
    REQUIRE(required_snr_db(12) == -20.0);
    for (int sf = 8; sf <= 12; ++sf) {
        REQUIRE(sensitivity_dbm(sf, 125000) < sensitivity_dbm(sf - 1, 125000));
        REQUIRE(required_snr_db(sf) < required_snr_db(sf - 1));
    }
}

TEST_CASE("out-of-range arguments are rejected") {
    RadioParams radio;
    REQUIRE_THROWS_AS(symbol_time_s(6, 125000), std::invalid_argument);
    REQUIRE_THROWS_AS(symbol_time_s(13, 125000), std::invalid_argument);
    REQUIRE_THROWS_AS(symbol_time_s(7, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(sensitivity_dbm(7, 250000), std::invalid_argument);
    REQUIRE_THROWS_AS(payload_symbols(20, 9, {4, 9}, 0, 0, AirtimeMode::fractional),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(tx_power_draw_w(3, radio), std::invalid_argument);
    REQUIRE_THROWS_AS(airtime_mode_from_string("exact"), std::invalid_argument);
}
