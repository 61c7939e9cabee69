#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "lorasim/adr.hpp"
#include "lorasim/channel.hpp"
#include "lorasim/config_space.hpp"
#include "lorasim/mobility.hpp"
#include "lorasim/rng.hpp"
#include "lorasim/scenario.hpp"

namespace lorasim {

enum class EventKind {
    next_transmission,
    uplink_start,
    uplink_end,
    downlink_start,
    downlink_end,
    waypoint_arrival,
};

struct Event {
    double time_s;
    std::uint64_t seq;  // total order among simultaneous events
    EventKind kind;
    int ed;
    std::size_t ref;  // attempt or downlink slot, depending on kind
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time_s != b.time_s) return a.time_s > b.time_s;
        return a.seq > b.seq;
    }
};

// Inputs for one independent replicate.
struct SimParams {
    int num_eds = 100;
    double cell_m = 9800.0;
    Position gateway{};
    ChannelParams channel{};
    MobilityParams mobility{};
    double mean_interval_s = 1000.0;
    Strategy strategy = Strategy::adr_lite;
    double device_margin_db = 5.0;
    int history_window = 20;
    int decision_interval = 20;
    int starvation_limit = 40;
    double horizon_s = 86400.0;
    const ConfigSpace* space = nullptr;
    LinkTables tables{};
    std::uint64_t seed = 1;
    bool collect_trace = false;
};

struct Metrics {
    std::uint64_t packets_sent = 0;
    std::uint64_t packets_received = 0;
    double total_energy_j = 0.0;
    std::vector<std::uint64_t> sent_per_ed;
    std::vector<std::uint64_t> received_per_ed;
    std::vector<double> energy_per_ed;

    std::optional<double> pdr() const {
        if (packets_sent == 0) return std::nullopt;
        return static_cast<double>(packets_received) / static_cast<double>(packets_sent);
    }

    // Energy cost of useful delivery: joules spent per unit of delivery ratio.
    std::optional<double> energy_cost() const {
        const auto p = pdr();
        if (!p || *p <= 0.0) return std::nullopt;
        return total_energy_j / *p;
    }
};

struct TraceRow {
    double time_s;
    int ed;
    int config_index;
    int sf;
    int tp_dbm;
    double cf_mhz;
    double rx_dbm;
    double snr_db;
    LossCause cause;  // none while in flight, patched when the frame resolves
    bool received;
};

struct DecisionRow {
    double time_s;
    int ed;
    int received_index;  // lite only; 0 for margin controllers
    bool matched;        // lite: frame arrived with the assigned index
    int assign_index;    // 0 when the space index is not tracked (margin row)
    int assign_sf;
    int assign_tp_dbm;
};

struct DownlinkRow {
    double time_s;
    int ed;
    int assign_sf;
    int assign_tp_dbm;
    bool delivered;
    bool applied;
};

struct SimResult {
    Metrics metrics;
    std::vector<TraceRow> trace;
    std::vector<DecisionRow> decisions;
    std::vector<DownlinkRow> downlinks;
};

// Single-gateway LoRa uplink simulator. One RNG drives everything, and every
// draw happens inside a handler of the totally ordered event queue, so a
// given (params, seed) pair always reproduces the same result bit for bit.
class Simulation {
public:
    explicit Simulation(const SimParams& p) : p_(p), rng_(p.seed) {
        if (!p.space || p.space->size() < 1)
            throw std::invalid_argument("simulation needs a non-empty config space");
        if (p.num_eds < 0) throw std::invalid_argument("num_eds must be >= 0");
    }

    SimResult run() {
        const int n = p_.num_eds;
        const int k_top = p_.space->size();
        result_ = {};
        result_.metrics.sent_per_ed.assign(static_cast<std::size_t>(n), 0);
        result_.metrics.received_per_ed.assign(static_cast<std::size_t>(n), 0);
        result_.metrics.energy_per_ed.assign(static_cast<std::size_t>(n), 0.0);
        eds_.clear();
        eds_.reserve(static_cast<std::size_t>(n));
        attempts_.clear();
        active_.clear();
        pending_.clear();
        seq_ = 0;
        max_toa_ = p_.space->max_toa();

        for (int i = 0; i < n; ++i) {
            Ed ed{BinarySearchState(k_top), SnrHistory(p_.history_window)};
            ed.mob.pos = {rng_.uniform(0.0, p_.cell_m), rng_.uniform(0.0, p_.cell_m)};
            ed.config_index = k_top;
            ed.config = p_.space->config_at(k_top);
            if (p_.mobility.mobile) {
                start_leg(ed.mob, rng_, p_.mobility, p_.cell_m, 0.0);
                schedule(ed.mob.leg_end_s, EventKind::waypoint_arrival, i, 0);
            }
            schedule(rng_.exponential(p_.mean_interval_s), EventKind::next_transmission, i, 0);
            eds_.push_back(std::move(ed));
        }

        while (!queue_.empty()) {
            const Event e = queue_.top();
            queue_.pop();
            if (e.time_s > p_.horizon_s) break;
            switch (e.kind) {
                case EventKind::next_transmission:
                    schedule(e.time_s, EventKind::uplink_start, e.ed, 0);
                    break;
                case EventKind::uplink_start: on_uplink_start(e); break;
                case EventKind::uplink_end: on_uplink_end(e); break;
                case EventKind::downlink_start: on_downlink_start(e); break;
                case EventKind::downlink_end: on_downlink_end(e); break;
                case EventKind::waypoint_arrival: on_waypoint_arrival(e); break;
            }
        }
        return std::move(result_);
    }

private:
    struct Ed {
        BinarySearchState ns;  // server-side search state for this device
        SnrHistory history;    // server-side SNR window for margin controllers
        MobilityState mob{};
        LoRaConfig config{};
        int config_index = 0;
        int receptions_since_decision = 0;
        int uplinks_since_downlink = 0;
    };

    struct Attempt {
        TransmissionAttempt tx;
        int config_index;
        std::int64_t trace_row;
    };

    struct PendingDownlink {
        LoRaConfig assign{};
        int assign_index = 0;
        double toa_s = 0.0;
        int mirror_sf = 0;  // margin controllers answer on the uplink's SF
        bool lite = false;
        bool delivered = false;
        bool applied = false;
    };

    void schedule(double t, EventKind kind, int ed, std::size_t ref) {
        queue_.push(Event{t, seq_++, kind, ed, ref});
    }

    Position ed_position(const Ed& ed, double t) const {
        return p_.mobility.mobile ? position_at(ed.mob, t) : ed.mob.pos;
    }

    void on_uplink_start(const Event& e) {
        Ed& ed = eds_[static_cast<std::size_t>(e.ed)];
        const int k_top = p_.space->size();
        if (p_.strategy == Strategy::no_adr) {
            ed.config_index = random_config_index(rng_, k_top);
            ed.config = p_.space->config_at(ed.config_index);
        } else if (p_.strategy == Strategy::adr_lite) {
            // Device-side recovery: after too many uplinks without hearing the
            // server, fall back to the most robust configuration.
            ++ed.uplinks_since_downlink;
            if (ed.uplinks_since_downlink >= p_.starvation_limit) {
                ed.config_index = k_top;
                ed.config = p_.space->config_at(k_top);
                ed.uplinks_since_downlink = 0;
            }
        }

        const Position pos = ed_position(ed, e.time_s);
        const double dist = distance_m(pos, p_.gateway);
        const double shadow = sample_shadowing_db(rng_, p_.channel);
        const double rx = received_power_dbm(ed.config.tp_dbm, dist, shadow, p_.channel);
        const double toa = p_.space->toa_at(ed.config_index);
        const double energy = p_.space->energy_at(ed.config_index);

        ++result_.metrics.packets_sent;
        ++result_.metrics.sent_per_ed[static_cast<std::size_t>(e.ed)];
        result_.metrics.total_energy_j += energy;
        result_.metrics.energy_per_ed[static_cast<std::size_t>(e.ed)] += energy;

        std::int64_t row = -1;
        if (p_.collect_trace) {
            row = static_cast<std::int64_t>(result_.trace.size());
            result_.trace.push_back({e.time_s, e.ed, ed.config_index, ed.config.sf,
                                     ed.config.tp_dbm, ed.config.cf_mhz, rx,
                                     snr_db(rx, ed.config.bw_hz, p_.channel), LossCause::none,
                                     false});
        }
        attempts_.push_back({{e.ed, ed.config.sf, ed.config.cf_mhz, ed.config.bw_hz, e.time_s,
                              e.time_s + toa, rx},
                             ed.config_index,
                             row});
        active_.push_back(attempts_.size() - 1);
        schedule(e.time_s + toa, EventKind::uplink_end, e.ed, attempts_.size() - 1);
        schedule(e.time_s + toa + rng_.exponential(p_.mean_interval_s),
                 EventKind::next_transmission, e.ed, 0);
    }

    void on_uplink_end(const Event& e) {
        const double cutoff = e.time_s - max_toa_ - 1e-9;
        std::size_t kept = 0;
        for (std::size_t idx : active_)
            if (attempts_[idx].tx.end_s > cutoff) active_[kept++] = idx;
        active_.resize(kept);

        Attempt& at = attempts_[e.ref];
        ReceptionOutcome out{true, LossCause::none};
        if (at.tx.rx_dbm < sensitivity_dbm(at.tx.sf, at.tx.bw_hz, p_.tables)) {
            out = {false, LossCause::below_sensitivity};
        } else {
            for (std::size_t idx : active_) {
                if (idx == e.ref) continue;
                const TransmissionAttempt& other = attempts_[idx].tx;
                if (interferes(at.tx, other) && at.tx.rx_dbm < other.rx_dbm + p_.channel.capture_db) {
                    out = {false, LossCause::collision};
                    break;
                }
            }
        }
        if (at.trace_row >= 0) {
            result_.trace[static_cast<std::size_t>(at.trace_row)].cause = out.cause;
            result_.trace[static_cast<std::size_t>(at.trace_row)].received = out.received;
        }
        if (!out.received) return;

        ++result_.metrics.packets_received;
        ++result_.metrics.received_per_ed[static_cast<std::size_t>(e.ed)];

        Ed& ed = eds_[static_cast<std::size_t>(e.ed)];
        if (p_.strategy == Strategy::no_adr) return;

        if (p_.strategy == Strategy::adr_lite) {
            if (++ed.receptions_since_decision < p_.decision_interval) return;
            ed.receptions_since_decision = 0;
            const int r = at.config_index;
            const bool matched = (r == ed.ns.k_prev);
            const int k_new = binary_search_update(ed.ns, r);
            const LoRaConfig assign = p_.space->config_at(k_new);
            if (p_.collect_trace)
                result_.decisions.push_back(
                    {e.time_s, e.ed, r, matched, k_new, assign.sf, assign.tp_dbm});
            pending_.push_back(
                {assign, k_new, p_.space->toa_at(k_new), assign.sf, true, false, false});
            schedule(e.time_s + 1.0, EventKind::downlink_start, e.ed, pending_.size() - 1);
            return;
        }

        const LoRaConfig frame = p_.space->config_at(at.config_index);
        ed.history.push(snr_db(at.tx.rx_dbm, at.tx.bw_hz, p_.channel));
        const auto stat = p_.strategy == Strategy::adr_max ? MarginStatistic::max
                                                           : MarginStatistic::average;
        const MarginDecision dec = margin_adr_update(ed.history, frame.sf, frame.tp_dbm, stat,
                                                     p_.device_margin_db, p_.tables);
        if (!dec.changed) return;
        LoRaConfig assign = frame;
        assign.sf = dec.sf;
        assign.tp_dbm = dec.tp_dbm;
        const int assign_index = p_.space->index_of(assign);
        if (p_.collect_trace)
            result_.decisions.push_back(
                {e.time_s, e.ed, 0, false, assign_index, assign.sf, assign.tp_dbm});
        pending_.push_back({assign, assign_index, p_.space->toa_at(at.config_index), frame.sf,
                            false, false, false});
        schedule(e.time_s + 1.0, EventKind::downlink_start, e.ed, pending_.size() - 1);
    }

    void on_downlink_start(const Event& e) {
        PendingDownlink& dl = pending_[e.ref];
        const Ed& ed = eds_[static_cast<std::size_t>(e.ed)];
        const Position pos = ed_position(ed, e.time_s);
        const double dist = distance_m(pos, p_.gateway);
        const double shadow = sample_shadowing_db(rng_, p_.channel);
        const int dl_sf = dl.lite ? dl.assign.sf : dl.mirror_sf;
        const double rx = received_power_dbm(gw_tp_dbm_, dist, shadow, p_.channel);
        if (p_.channel.ideal_downlink) {
            dl.delivered = true;
            dl.applied = true;
        } else {
            dl.delivered = rx >= sensitivity_dbm(dl_sf, dl.assign.bw_hz, p_.tables);
            dl.applied = dl.delivered;
            if (dl.lite) {
                // The device accepts the assignment only if its own budget
                // would survive the fade the command frame just sounded.
                const double assign_rx =
                    received_power_dbm(dl.assign.tp_dbm, dist, shadow, p_.channel);
                dl.applied = dl.delivered &&
                             assign_rx >= sensitivity_dbm(dl.assign.sf, dl.assign.bw_hz, p_.tables);
            }
        }
        schedule(e.time_s + dl.toa_s, EventKind::downlink_end, e.ed, e.ref);
    }

    void on_downlink_end(const Event& e) {
        const PendingDownlink& dl = pending_[e.ref];
        Ed& ed = eds_[static_cast<std::size_t>(e.ed)];
        if (dl.applied) {
            ed.config = dl.assign;
            ed.config_index = dl.assign_index;
            if (dl.lite) ed.uplinks_since_downlink = 0;
        }
        if (p_.collect_trace)
            result_.downlinks.push_back(
                {e.time_s, e.ed, dl.assign.sf, dl.assign.tp_dbm, dl.delivered, dl.applied});
    }

    void on_waypoint_arrival(const Event& e) {
        Ed& ed = eds_[static_cast<std::size_t>(e.ed)];
        ed.mob.pos = ed.mob.target;
        start_leg(ed.mob, rng_, p_.mobility, p_.cell_m, e.time_s);
        schedule(ed.mob.leg_end_s, EventKind::waypoint_arrival, e.ed, 0);
    }

    static constexpr int gw_tp_dbm_ = 14;

    SimParams p_;
    Rng rng_;
    double max_toa_ = 0.0;
    std::uint64_t seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::vector<Ed> eds_;
    std::vector<Attempt> attempts_;
    std::vector<std::size_t> active_;
    std::vector<PendingDownlink> pending_;
    SimResult result_;
};

}  // namespace lorasim
