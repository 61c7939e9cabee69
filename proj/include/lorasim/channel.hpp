#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "lorasim/phy.hpp"
#include "lorasim/rng.hpp"

namespace lorasim {

struct Position {
    double x_m = 0.0;
    double y_m = 0.0;
};

inline double distance_m(const Position& a, const Position& b) {
    return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

// Log-distance path loss with lognormal shadowing, parameterized by a
// measurement at reference distance d0.
struct ChannelParams {
    double pl0_db = 128.95;
    double exponent_n = 2.32;
    double d0_m = 1000.0;
    double sigma_db = 7.08;
    double noise_figure_db = 6.0;
    double antenna_gains_db = 0.0;
    double capture_db = 6.0;
    bool ideal_downlink = false;
};

inline double path_loss_db(double distance, const ChannelParams& ch) {
    if (distance < 1.0) {
        static bool warned = false;
        if (!warned) {
            std::fprintf(stderr, "warning: distance %.6g m clamped to 1 m\n", distance);
            warned = true;
        }
        distance = 1.0;
    }
    return ch.pl0_db + 10.0 * ch.exponent_n * std::log10(distance / ch.d0_m);
}

// One iid draw per transmission. Consumes the same number of RNG values at
// sigma = 0 so the event stream shape does not depend on sigma.
inline double sample_shadowing_db(Rng& rng, const ChannelParams& ch) {
    return rng.normal(0.0, ch.sigma_db);
}

inline double received_power_dbm(int tp_dbm, double distance, double shadowing_db,
                                 const ChannelParams& ch) {
    return tp_dbm + ch.antenna_gains_db - path_loss_db(distance, ch) - shadowing_db;
}

inline double noise_floor_dbm(int bw_hz, const ChannelParams& ch) {
    return -174.0 + 10.0 * std::log10(static_cast<double>(bw_hz)) + ch.noise_figure_db;
}

inline double snr_db(double rx_dbm, int bw_hz, const ChannelParams& ch) {
    return rx_dbm - noise_floor_dbm(bw_hz, ch);
}

enum class LossCause { none, below_sensitivity, collision };

struct TransmissionAttempt {
    int ed_id = 0;
    int sf = 7;
    double cf_mhz = 868.1;
    int bw_hz = 125000;
    double start_s = 0.0;
    double end_s = 0.0;
    double rx_dbm = 0.0;
};

inline bool overlaps(const TransmissionAttempt& a, const TransmissionAttempt& b) {
    return a.start_s < b.end_s && b.start_s < a.end_s;
}

// Same-SF same-CF concurrent frames interfere; different SFs or CFs are
// treated as orthogonal. A frame survives interference only if it beats every
// overlapping rival by the capture threshold, so equal powers destroy both.
inline bool interferes(const TransmissionAttempt& a, const TransmissionAttempt& b) {
    return a.sf == b.sf && a.cf_mhz == b.cf_mhz && a.bw_hz == b.bw_hz && overlaps(a, b);
}

struct ReceptionOutcome {
    bool received = false;
    LossCause cause = LossCause::none;
};

inline ReceptionOutcome resolve_reception(const TransmissionAttempt& a,
                                          const std::vector<TransmissionAttempt>& others,
                                          const ChannelParams& ch, const LinkTables& tables = {}) {
    if (a.rx_dbm < sensitivity_dbm(a.sf, a.bw_hz, tables)) return {false, LossCause::below_sensitivity};
    for (const auto& b : others) {
        if (&a == &b || a.ed_id == b.ed_id) continue;
        if (interferes(a, b) && a.rx_dbm < b.rx_dbm + ch.capture_db)
            return {false, LossCause::collision};
    }
    return {true, LossCause::none};
}

// Batch form over a set of concurrent attempts (each judged against all the
// others); the simulator's incremental bookkeeping must agree with this.
inline std::vector<ReceptionOutcome> resolve_receptions(
    const std::vector<TransmissionAttempt>& attempts, const ChannelParams& ch,
    const LinkTables& tables = {}) {
    std::vector<ReceptionOutcome> out;
    out.reserve(attempts.size());
    for (const auto& a : attempts) out.push_back(resolve_reception(a, attempts, ch, tables));
    return out;
}

}  // namespace lorasim
