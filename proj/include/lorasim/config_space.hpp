#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "lorasim/phy.hpp"

namespace lorasim {

// Axes of the transmission-parameter product space.
struct ConfigDimensions {
    std::vector<int> sf = {7, 8, 9, 10, 11, 12};
    std::vector<int> tp = {2, 5, 8, 11, 14};
    std::vector<double> cf = {868.1};
    std::vector<CodingRate> cr = {{4, 5}};
    int bw_hz = 125000;
};

// Named dimension presets used by the parameter-space sweep.
inline ConfigDimensions dimension_preset(const std::string& name) {
    ConfigDimensions d;
    if (name == "config-1") {
        // 6 SF x 5 TP = 30
    } else if (name == "config-2") {
        d.cf = {868.1, 868.4, 868.7};  // x3 CF = 90
    } else if (name == "config-3") {
        d.cr = {{4, 5}, {4, 6}, {4, 7}, {4, 8}};  // x4 CR = 120
    } else if (name == "config-4") {
        d.cf = {868.1, 868.4, 868.7};
        d.cr = {{4, 5}, {4, 6}, {4, 7}, {4, 8}};  // x3 x4 = 360
    } else {
        throw std::invalid_argument("unknown dimension preset: " + name);
    }
    return d;
}

// Energy-sorted action space shared by network server and end devices.
// Indices are 1-based: 1 is the cheapest configuration, size() the costliest.
class ConfigSpace {
public:
    ConfigSpace(const ConfigDimensions& dims, const RadioParams& radio, AirtimeMode mode)
        : radio_(radio), mode_(mode) {
        if (dims.sf.empty() || dims.tp.empty() || dims.cf.empty() || dims.cr.empty())
            throw std::invalid_argument("every dimension needs at least one value");
        for (int sf : dims.sf)
            for (int tp : dims.tp)
                for (double cf : dims.cf)
                    for (CodingRate cr : dims.cr) {
                        LoRaConfig cfg{sf, tp, cf, cr, dims.bw_hz};
                        configs_.push_back(cfg);
                        energies_.push_back(energy_per_packet_j(cfg, radio, mode));
                        toas_.push_back(time_on_air_s(cfg, radio, mode));
                    }
        std::vector<std::size_t> order(configs_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (energies_[a] != energies_[b]) return energies_[a] < energies_[b];
            const LoRaConfig& ca = configs_[a];
            const LoRaConfig& cb = configs_[b];
            if (ca.sf != cb.sf) return ca.sf < cb.sf;
            if (ca.tp_dbm != cb.tp_dbm) return ca.tp_dbm < cb.tp_dbm;
            if (ca.cr.value() != cb.cr.value()) return ca.cr.value() < cb.cr.value();
            return ca.cf_mhz < cb.cf_mhz;
        });
        apply_order(order);
    }

    int size() const { return static_cast<int>(configs_.size()); }

    const LoRaConfig& config_at(int index) const {
        check_index(index);
        return configs_[index - 1];
    }

    double energy_at(int index) const {
        check_index(index);
        return energies_[index - 1];
    }

    double toa_at(int index) const {
        check_index(index);
        return toas_[index - 1];
    }

    double max_toa() const {
        double m = 0.0;
        for (double t : toas_) m = std::max(m, t);
        return m;
    }

    // 1-based rank of a configuration; throws if it is not in the space.
    int index_of(const LoRaConfig& cfg) const {
        for (std::size_t i = 0; i < configs_.size(); ++i)
            if (configs_[i] == cfg) return static_cast<int>(i) + 1;
        throw std::invalid_argument("configuration not in space");
    }

    const RadioParams& radio() const { return radio_; }
    AirtimeMode mode() const { return mode_; }

private:
    void check_index(int index) const {
        if (index < 1 || index > size())
            throw std::out_of_range("config index " + std::to_string(index) + " out of 1.." +
                                    std::to_string(size()));
    }

    void apply_order(const std::vector<std::size_t>& order) {
        std::vector<LoRaConfig> c(order.size());
        std::vector<double> e(order.size()), t(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            c[i] = configs_[order[i]];
            e[i] = energies_[order[i]];
            t[i] = toas_[order[i]];
        }
        configs_ = std::move(c);
        energies_ = std::move(e);
        toas_ = std::move(t);
    }

    std::vector<LoRaConfig> configs_;
    std::vector<double> energies_;
    std::vector<double> toas_;
    RadioParams radio_;
    AirtimeMode mode_;
};

}  // namespace lorasim
