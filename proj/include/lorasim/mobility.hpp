#pragma once

#include <stdexcept>

#include "lorasim/channel.hpp"
#include "lorasim/rng.hpp"

namespace lorasim {

struct MobilityParams {
    bool mobile = false;
    double mean_speed_mps = 2.5;
    double max_speed_mps = 5.0;
};

// Random-waypoint walker with zero pause time. Between waypoints the node
// moves in a straight line at the leg's constant speed.
struct MobilityState {
    Position pos{};
    Position target{};
    Position leg_origin{};
    double speed_mps = 0.0;
    double leg_start_s = 0.0;
    double leg_end_s = 0.0;
};

// Exponential speeds resampled until they land in (0, max]; degenerate zero
// draws are rejected so a leg always finishes.
inline double sample_leg_speed(Rng& rng, const MobilityParams& mp) {
    if (mp.max_speed_mps <= 0.0) throw std::invalid_argument("max speed must be positive");
    double s;
    do {
        s = rng.exponential(mp.mean_speed_mps);
    } while (s <= 0.0 || s > mp.max_speed_mps);
    return s;
}

inline void start_leg(MobilityState& st, Rng& rng, const MobilityParams& mp, double cell_m,
                      double now_s) {
    st.leg_origin = st.pos;
    st.target = {rng.uniform(0.0, cell_m), rng.uniform(0.0, cell_m)};
    st.speed_mps = sample_leg_speed(rng, mp);
    st.leg_start_s = now_s;
    st.leg_end_s = now_s + distance_m(st.leg_origin, st.target) / st.speed_mps;
}

inline Position position_at(const MobilityState& st, double t_s) {
    if (t_s >= st.leg_end_s) return st.target;
    if (t_s <= st.leg_start_s || st.leg_end_s == st.leg_start_s) return st.leg_origin;
    const double f = (t_s - st.leg_start_s) / (st.leg_end_s - st.leg_start_s);
    return {st.leg_origin.x_m + f * (st.target.x_m - st.leg_origin.x_m),
            st.leg_origin.y_m + f * (st.target.y_m - st.leg_origin.y_m)};
}

}  // namespace lorasim
