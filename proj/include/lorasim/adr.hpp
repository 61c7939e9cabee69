#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lorasim/phy.hpp"
#include "lorasim/rng.hpp"

namespace lorasim {

// Binary-search rate controller state kept per end device on the server.
// Deliberately holds no history: the next index is a function of the last
// assignment and the index the frame actually arrived with.
struct BinarySearchState {
    int k_prev;      // last assigned index
    int space_size;  // |K|

    explicit BinarySearchState(int size) : k_prev(size), space_size(size) {
        if (size < 1) throw std::invalid_argument("space size must be >= 1");
    }
};

// One controller step. A frame arriving with the assigned index confirms the
// budget, so the search halves downward from it; any other index means the
// assignment did not stick and the search re-centers between the previous
// assignment and the top of the space.
inline int binary_search_update(BinarySearchState& st, int received_index) {
    if (received_index < 1 || received_index > st.space_size)
        throw std::invalid_argument("received index out of range");
    int lo, hi;
    if (received_index == st.k_prev) {
        lo = 1;
        hi = st.k_prev;
    } else {
        lo = st.k_prev;
        hi = st.space_size;
    }
    st.k_prev = (lo + hi) / 2;
    return st.k_prev;
}

// Fixed-capacity SNR history for the margin-based controllers. Pushing past
// the window evicts the oldest sample; a decision consumes the whole window.
class SnrHistory {
public:
    explicit SnrHistory(int window) : window_(window) {
        if (window < 1) throw std::invalid_argument("window must be >= 1");
        samples_.reserve(static_cast<std::size_t>(window));
    }

    void push(double snr_db) {
        if (static_cast<int>(samples_.size()) == window_) samples_.erase(samples_.begin());
        samples_.push_back(snr_db);
    }

    bool full() const { return static_cast<int>(samples_.size()) == window_; }
    int window() const { return window_; }
    const std::vector<double>& samples() const { return samples_; }
    void clear() { samples_.clear(); }

private:
    int window_;
    std::vector<double> samples_;
};

enum class MarginStatistic { max, average };

struct MarginDecision {
    bool changed = false;
    int sf = 0;
    int tp_dbm = 0;
};

// Standard margin-driven ADR step: compare the window statistic against the
// SNR the current SF needs plus a safety margin, then spend whole 3 dB steps
// lowering SF first and TP second, or raise TP when the margin is negative.
inline MarginDecision margin_adr_update(SnrHistory& history, int current_sf, int current_tp_dbm,
                                        MarginStatistic stat, double device_margin_db,
                                        const LinkTables& tables = {}) {
    check_sf(current_sf);
    if (!history.full()) return {};
    const auto& s = history.samples();
    double m;
    if (stat == MarginStatistic::max) {
        m = *std::max_element(s.begin(), s.end());
    } else {
        m = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    }
    history.clear();

    const double margin = m - required_snr_db(current_sf, tables) - device_margin_db;
    int n_step = static_cast<int>(std::floor(margin / 3.0));
    int sf = current_sf;
    int tp = current_tp_dbm;
    while (n_step > 0 && sf > 7) {
        --sf;
        --n_step;
    }
    while (n_step > 0 && tp > 2) {
        tp -= 3;
        --n_step;
    }
    while (n_step < 0 && tp < 14) {
        tp += 3;
        ++n_step;
    }
    if (sf == current_sf && tp == current_tp_dbm) return {};
    return {true, sf, tp};
}

// Strategy that never adapts: a fresh uniform index per transmission.
inline int random_config_index(Rng& rng, int space_size) {
    if (space_size < 1) throw std::invalid_argument("space size must be >= 1");
    return 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(space_size)));
}

}  // namespace lorasim
