#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace lorasim {

// How the payload symbol count is rounded.
//   fractional: ceil() around the information bits only, so the symbol count
//               may be non-integral (8 + ceil(theta/gamma) * 1/CR).
//   semtech:    the SX127x datasheet formula with whole interleaver blocks
//               (8 + ceil(theta/(4*gamma)) * (4+k) for CR = 4/(4+k)).
enum class AirtimeMode { fractional, semtech };

inline std::string to_string(AirtimeMode m) {
    return m == AirtimeMode::fractional ? "fractional" : "semtech";
}

inline AirtimeMode airtime_mode_from_string(const std::string& s) {
    if (s == "fractional") return AirtimeMode::fractional;
    if (s == "semtech") return AirtimeMode::semtech;
    throw std::invalid_argument("unknown airtime mode: " + s);
}

// Coding rate as an exact ratio, e.g. {4, 5} for 4/5.
struct CodingRate {
    int num = 4;
    int den = 5;

    double value() const { return static_cast<double>(num) / den; }
    friend bool operator==(const CodingRate&, const CodingRate&) = default;
};

struct LoRaConfig {
    int sf = 12;           // spreading factor, 7..12
    int tp_dbm = 14;       // transmit power
    double cf_mhz = 868.1; // carrier frequency
    CodingRate cr{};
    int bw_hz = 125000;

    friend bool operator==(const LoRaConfig&, const LoRaConfig&) = default;
};

// Transceiver current-draw model and framing parameters.
struct RadioParams {
    double p_on_w = 0.0165;  // baseband/controller draw while the radio is on
    std::map<int, double> p_tx_w = {
        {2, 0.0792}, {5, 0.0891}, {8, 0.1056}, {11, 0.1254}, {14, 0.1485},
    };
    int n_preamble = 8;
    int header_disabled = 0;  // H: 1 = implicit header
    int ldro = 0;             // DE: low data rate optimization flag
    bool ldro_auto = false;   // force DE=1 for SF11/SF12 at 125 kHz
    int payload_bytes = 20;
};

// Receiver-side limits per SF (125 kHz rows of the transceiver datasheet).
struct LinkTables {
    std::array<double, 6> sensitivity_dbm_125k = {-124.0, -127.0, -130.0,
                                                  -133.0, -135.0, -137.0};
    std::array<double, 6> required_snr_db = {-7.5, -10.0, -12.5, -15.0, -17.5, -20.0};
};

inline void check_sf(int sf) {
    if (sf < 7 || sf > 12) throw std::invalid_argument("sf must be in 7..12, got " + std::to_string(sf));
}

inline double sensitivity_dbm(int sf, int bw_hz, const LinkTables& tables = {}) {
    check_sf(sf);
    if (bw_hz != 125000)
        throw std::invalid_argument("no sensitivity entry for bw " + std::to_string(bw_hz));
    return tables.sensitivity_dbm_125k[sf - 7];
}

inline double required_snr_db(int sf, const LinkTables& tables = {}) {
    check_sf(sf);
    return tables.required_snr_db[sf - 7];
}

// Duration of one chirp: 2^SF / BW.
inline double symbol_time_s(int sf, int bw_hz) {
    check_sf(sf);
    if (bw_hz <= 0) throw std::invalid_argument("bw must be positive");
    return std::exp2(sf) / bw_hz;
}

// Information bits that must be carried by the payload symbols.
inline int payload_bit_budget(int payload_bytes, int sf, int header_disabled) {
    return 8 * payload_bytes - 4 * sf + 16 + 28 - 20 * header_disabled;
}

inline int effective_ldro(const LoRaConfig& cfg, const RadioParams& radio) {
    if (radio.ldro) return 1;
    if (radio.ldro_auto && cfg.sf >= 11 && cfg.bw_hz == 125000) return 1;
    return 0;
}

inline double payload_symbols(int payload_bytes, int sf, CodingRate cr, int header_disabled,
                              int ldro, AirtimeMode mode) {
    check_sf(sf);
    if (cr.num != 4 || cr.den < 5 || cr.den > 8)
        throw std::invalid_argument("coding rate must be 4/5..4/8");
    const int gamma = sf - 2 * ldro;
    if (gamma <= 0) throw std::invalid_argument("ldro leaves no usable bits per symbol");
    const int theta = payload_bit_budget(payload_bytes, sf, header_disabled);
    double extra;
    if (mode == AirtimeMode::fractional) {
        extra = std::ceil(static_cast<double>(theta) / gamma) * (static_cast<double>(cr.den) / cr.num);
    } else {
        extra = std::ceil(static_cast<double>(theta) / (4.0 * gamma)) * cr.den;
    }
    return 8.0 + std::max(extra, 0.0);
}

inline double time_on_air_s(const LoRaConfig& cfg, const RadioParams& radio, AirtimeMode mode) {
    const double ts = symbol_time_s(cfg.sf, cfg.bw_hz);
    const double n_payload = payload_symbols(radio.payload_bytes, cfg.sf, cfg.cr,
                                             radio.header_disabled, effective_ldro(cfg, radio), mode);
    return (4.25 + radio.n_preamble) * ts + n_payload * ts;
}

inline double tx_power_draw_w(int tp_dbm, const RadioParams& radio) {
    auto it = radio.p_tx_w.find(tp_dbm);
    if (it == radio.p_tx_w.end())
        throw std::invalid_argument("no power-draw entry for tp " + std::to_string(tp_dbm) + " dBm");
    return it->second;
}

inline double energy_per_packet_j(const LoRaConfig& cfg, const RadioParams& radio, AirtimeMode mode) {
    return (radio.p_on_w + tx_power_draw_w(cfg.tp_dbm, radio)) * time_on_air_s(cfg, radio, mode);
}

}  // namespace lorasim
