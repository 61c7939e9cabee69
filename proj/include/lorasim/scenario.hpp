#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lorasim/channel.hpp"
#include "lorasim/config_space.hpp"
#include "lorasim/mobility.hpp"
#include "lorasim/phy.hpp"

namespace lorasim {

enum class Strategy { adr_lite, adr_max, adr_avg, no_adr };

inline std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::adr_lite: return "adr-lite";
        case Strategy::adr_max: return "adr-max";
        case Strategy::adr_avg: return "adr-avg";
        case Strategy::no_adr: return "no-adr";
    }
    throw std::logic_error("bad strategy enum");
}

inline Strategy strategy_from_string(const std::string& s) {
    if (s == "adr-lite") return Strategy::adr_lite;
    if (s == "adr-max") return Strategy::adr_max;
    if (s == "adr-avg") return Strategy::adr_avg;
    if (s == "no-adr") return Strategy::no_adr;
    throw std::invalid_argument("unknown strategy: " + s);
}

enum class SweepKind { none, num_eds, sigma, space };

inline std::string to_string(SweepKind k) {
    switch (k) {
        case SweepKind::none: return "none";
        case SweepKind::num_eds: return "num_eds";
        case SweepKind::sigma: return "sigma";
        case SweepKind::space: return "space";
    }
    throw std::logic_error("bad sweep enum");
}

inline SweepKind sweep_kind_from_string(const std::string& s) {
    if (s == "none") return SweepKind::none;
    if (s == "num_eds") return SweepKind::num_eds;
    if (s == "sigma") return SweepKind::sigma;
    if (s == "space") return SweepKind::space;
    throw std::invalid_argument("unknown sweep kind: " + s);
}

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Complete description of one experiment, including the swept axis.
struct Scenario {
    std::string name = "custom";

    double cell_m = 9800.0;
    int num_eds = 100;
    double gateway_x_m = std::numeric_limits<double>::quiet_NaN();  // NaN: cell center
    double gateway_y_m = std::numeric_limits<double>::quiet_NaN();

    ChannelParams channel{};

    int payload_bytes = 20;
    double mean_interval_s = 1000.0;

    MobilityParams mobility{};

    std::vector<Strategy> strategies = {Strategy::adr_lite, Strategy::adr_max,
                                        Strategy::adr_avg, Strategy::no_adr};
    double device_margin_db = 5.0;
    int history_window = 20;
    int decision_interval = 20;
    int starvation_limit = 40;

    ConfigDimensions dims{};

    RadioParams radio{};
    AirtimeMode airtime_mode = AirtimeMode::fractional;

    double horizon_s = 86400.0;
    int replicates = 5;
    std::uint64_t seed = 1;
    SweepKind sweep = SweepKind::none;
    std::vector<std::string> sweep_values;

    Position gateway() const {
        const double x = std::isnan(gateway_x_m) ? cell_m / 2.0 : gateway_x_m;
        const double y = std::isnan(gateway_y_m) ? cell_m / 2.0 : gateway_y_m;
        return {x, y};
    }
};

// Shortest decimal form that parses back to the same double.
inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

inline double parse_double(const std::string& where, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ScenarioError(where + ": expected a number, got '" + v + "'");
    }
}

inline long long parse_int(const std::string& where, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long n = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return n;
    } catch (const std::exception&) {
        throw ScenarioError(where + ": expected an integer, got '" + v + "'");
    }
}

inline bool parse_bool(const std::string& where, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ScenarioError(where + ": expected true/false, got '" + v + "'");
}

inline CodingRate parse_cr(const std::string& where, const std::string& v) {
    const auto parts = split(v, '/');
    if (parts.size() != 2)
        throw ScenarioError(where + ": expected coding rate like 4/5, got '" + v + "'");
    return {static_cast<int>(parse_int(where, parts[0])),
            static_cast<int>(parse_int(where, parts[1]))};
}

}  // namespace detail

// Strict INI-style parser: every key must be known, every value well formed.
// '#' and ';' start comments.
inline Scenario parse_scenario_text(const std::string& text) {
    Scenario s;
    std::string section;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find_first_of("#;");
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ScenarioError("line " + std::to_string(line_no) + ": unterminated section");
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        const std::string path = section + "." + key;
        if (!seen.insert(path).second) throw ScenarioError(path + ": duplicate key");

        using detail::parse_bool;
        using detail::parse_cr;
        using detail::parse_double;
        using detail::parse_int;
        using detail::split;

        if (section == "network") {
            if (key == "cell_m") s.cell_m = parse_double(path, val);
            else if (key == "num_eds") s.num_eds = static_cast<int>(parse_int(path, val));
            else if (key == "gateway_x_m") s.gateway_x_m = parse_double(path, val);
            else if (key == "gateway_y_m") s.gateway_y_m = parse_double(path, val);
            else throw ScenarioError("unknown key: " + path);
        } else if (section == "channel") {
            if (key == "pl0_db") s.channel.pl0_db = parse_double(path, val);
            else if (key == "exponent_n") s.channel.exponent_n = parse_double(path, val);
            else if (key == "d0_m") s.channel.d0_m = parse_double(path, val);
            else if (key == "sigma_db") s.channel.sigma_db = parse_double(path, val);
            else if (key == "noise_figure_db") s.channel.noise_figure_db = parse_double(path, val);
            else if (key == "antenna_gains_db") s.channel.antenna_gains_db = parse_double(path, val);
            else if (key == "capture_db") s.channel.capture_db = parse_double(path, val);
            else if (key == "ideal_downlink") s.channel.ideal_downlink = parse_bool(path, val);
            else throw ScenarioError("unknown key: " + path);
        } else if (section == "traffic") {
            if (key == "payload_bytes") s.payload_bytes = static_cast<int>(parse_int(path, val));
            else if (key == "mean_interval_s") s.mean_interval_s = parse_double(path, val);
            else throw ScenarioError("unknown key: " + path);
        } else if (section == "mobility") {
            if (key == "mode") {
                if (val == "static") s.mobility.mobile = false;
                else if (val == "random-waypoint") s.mobility.mobile = true;
                else throw ScenarioError(path + ": expected static|random-waypoint, got '" + val + "'");
            } else if (key == "mean_speed_mps") s.mobility.mean_speed_mps = parse_double(path, val);
            else if (key == "max_speed_mps") s.mobility.max_speed_mps = parse_double(path, val);
            else throw ScenarioError("unknown key: " + path);
        } else if (section == "strategy") {
            if (key == "strategies") {
                s.strategies.clear();
                for (const auto& tok : split(val, ',')) {
                    try {
                        s.strategies.push_back(strategy_from_string(tok));
                    } catch (const std::exception& e) {
                        throw ScenarioError(path + ": " + e.what());
                    }
                }
            } else if (key == "device_margin_db") s.device_margin_db = parse_double(path, val);
            else if (key == "history_window") s.history_window = static_cast<int>(parse_int(path, val));
            else if (key == "decision_interval") s.decision_interval = static_cast<int>(parse_int(path, val));
            else if (key == "starvation_limit") s.starvation_limit = static_cast<int>(parse_int(path, val));
            else throw ScenarioError("unknown key: " + path);
        } else if (section == "space") {
            if (key == "sf") {
                s.dims.sf.clear();
                for (const auto& tok : split(val, ',')) s.dims.sf.push_back(static_cast<int>(parse_int(path, tok)));
            } else if (key == "tp") {
                s.dims.tp.clear();
                for (const auto& tok : split(val, ',')) s.dims.tp.push_back(static_cast<int>(parse_int(path, tok)));
            } else if (key == "cf") {
                s.dims.cf.clear();
                for (const auto& tok : split(val, ',')) s.dims.cf.push_back(parse_double(path, tok));
            } else if (key == "cr") {
                s.dims.cr.clear();
                for (const auto& tok : split(val, ',')) s.dims.cr.push_back(parse_cr(path, tok));
            } else if (key == "bw_hz") s.dims.bw_hz = static_cast<int>(parse_int(path, val));
            else throw ScenarioError("unknown key: " + path);
        } else if (section == "radio") {
            if (key == "p_on_w") s.radio.p_on_w = parse_double(path, val);
            else if (key == "p_tx_w") {
                s.radio.p_tx_w.clear();
                for (const auto& tok : split(val, ',')) {
                    const auto kv = split(tok, ':');
                    if (kv.size() != 2)
                        throw ScenarioError(path + ": expected tp:watts entries, got '" + tok + "'");
                    s.radio.p_tx_w[static_cast<int>(parse_int(path, kv[0]))] = parse_double(path, kv[1]);
                }
            } else if (key == "n_preamble") s.radio.n_preamble = static_cast<int>(parse_int(path, val));
            else if (key == "header_disabled") s.radio.header_disabled = static_cast<int>(parse_int(path, val));
            else if (key == "ldro") s.radio.ldro = static_cast<int>(parse_int(path, val));
            else if (key == "ldro_auto") s.radio.ldro_auto = parse_bool(path, val);
            else if (key == "airtime_mode") {
                try {
                    s.airtime_mode = airtime_mode_from_string(val);
                } catch (const std::exception& e) {
                    throw ScenarioError(path + ": " + e.what());
                }
            } else throw ScenarioError("unknown key: " + path);
        } else if (section == "run") {
            if (key == "name") s.name = val;
            else if (key == "horizon_s") s.horizon_s = parse_double(path, val);
            else if (key == "replicates") s.replicates = static_cast<int>(parse_int(path, val));
            else if (key == "seed") s.seed = static_cast<std::uint64_t>(parse_int(path, val));
            else if (key == "sweep") {
                try {
                    s.sweep = sweep_kind_from_string(val);
                } catch (const std::exception& e) {
                    throw ScenarioError(path + ": " + e.what());
                }
            } else if (key == "sweep_values") {
                s.sweep_values = split(val, ',');
            } else throw ScenarioError("unknown key: " + path);
        } else {
            throw ScenarioError("unknown key: " + path);
        }
    }
    return s;
}

// A swept point resolved to concrete per-run parameters.
struct SweepCell {
    std::string key;  // canonical token for seeds, CSV columns and file names
    int num_eds;
    double sigma_db;
    ConfigDimensions dims;
};

inline void validate_scenario(const Scenario& s) {
    if (s.cell_m <= 0.0) throw ScenarioError("network.cell_m must be positive");
    if (s.num_eds < 0) throw ScenarioError("network.num_eds must be >= 0");
    if (s.payload_bytes < 1) throw ScenarioError("traffic.payload_bytes must be >= 1");
    if (s.mean_interval_s <= 0.0) throw ScenarioError("traffic.mean_interval_s must be positive");
    if (s.channel.sigma_db < 0.0) throw ScenarioError("channel.sigma_db must be >= 0");
    if (s.channel.d0_m <= 0.0) throw ScenarioError("channel.d0_m must be positive");
    if (s.mobility.mobile && s.mobility.max_speed_mps <= 0.0)
        throw ScenarioError("mobility.max_speed_mps must be positive");
    if (s.mobility.mobile && s.mobility.mean_speed_mps <= 0.0)
        throw ScenarioError("mobility.mean_speed_mps must be positive");
    if (s.strategies.empty()) throw ScenarioError("strategy.strategies must not be empty");
    if (s.device_margin_db < 0.0) throw ScenarioError("strategy.device_margin_db must be >= 0");
    if (s.history_window < 1) throw ScenarioError("strategy.history_window must be >= 1");
    if (s.decision_interval < 1) throw ScenarioError("strategy.decision_interval must be >= 1");
    if (s.starvation_limit < 1) throw ScenarioError("strategy.starvation_limit must be >= 1");
    if (s.horizon_s <= 0.0) throw ScenarioError("run.horizon_s must be positive");
    if (s.replicates < 1) throw ScenarioError("run.replicates must be >= 1");
    if (s.dims.sf.empty() || s.dims.tp.empty() || s.dims.cf.empty() || s.dims.cr.empty())
        throw ScenarioError("space dimensions must not be empty");
    for (int sf : s.dims.sf) check_sf(sf);
    for (int tp : s.dims.tp)
        if (!s.radio.p_tx_w.count(tp))
            throw ScenarioError("space.tp value " + std::to_string(tp) + " has no radio.p_tx_w entry");
    if (s.sweep != SweepKind::none && s.sweep_values.empty())
        throw ScenarioError("run.sweep_values must not be empty when run.sweep is set");
    if (s.sweep == SweepKind::none && !s.sweep_values.empty())
        throw ScenarioError("run.sweep_values given but run.sweep is none");
}

// Resolves the swept axis to concrete cells; canonical keys come from
// re-formatting the parsed values.
inline std::vector<SweepCell> expand_sweep(const Scenario& s) {
    validate_scenario(s);
    std::vector<SweepCell> cells;
    if (s.sweep == SweepKind::none) {
        cells.push_back({"", s.num_eds, s.channel.sigma_db, s.dims});
    } else {
        for (const auto& tok : s.sweep_values) {
            SweepCell c{tok, s.num_eds, s.channel.sigma_db, s.dims};
            if (s.sweep == SweepKind::num_eds) {
                c.num_eds = static_cast<int>(detail::parse_int("run.sweep_values", tok));
                if (c.num_eds < 0) throw ScenarioError("run.sweep_values: num_eds must be >= 0");
                c.key = std::to_string(c.num_eds);
            } else if (s.sweep == SweepKind::sigma) {
                c.sigma_db = detail::parse_double("run.sweep_values", tok);
                if (c.sigma_db < 0.0) throw ScenarioError("run.sweep_values: sigma must be >= 0");
                c.key = fmt_double(c.sigma_db);
            } else {
                try {
                    c.dims = dimension_preset(tok);
                } catch (const std::exception& e) {
                    throw ScenarioError(std::string("run.sweep_values: ") + e.what());
                }
                c.key = tok;
            }
            cells.push_back(std::move(c));
        }
    }
    return cells;
}

// Canonical text form; parse(serialize(s)) reproduces s field for field.
inline std::string serialize_scenario(const Scenario& s) {
    std::ostringstream o;
    o << "[network]\n";
    o << "cell_m = " << fmt_double(s.cell_m) << "\n";
    o << "num_eds = " << s.num_eds << "\n";
    o << "gateway_x_m = " << fmt_double(s.gateway().x_m) << "\n";
    o << "gateway_y_m = " << fmt_double(s.gateway().y_m) << "\n\n";

    o << "[channel]\n";
    o << "pl0_db = " << fmt_double(s.channel.pl0_db) << "\n";
    o << "exponent_n = " << fmt_double(s.channel.exponent_n) << "\n";
    o << "d0_m = " << fmt_double(s.channel.d0_m) << "\n";
    o << "sigma_db = " << fmt_double(s.channel.sigma_db) << "\n";
    o << "noise_figure_db = " << fmt_double(s.channel.noise_figure_db) << "\n";
    o << "antenna_gains_db = " << fmt_double(s.channel.antenna_gains_db) << "\n";
    o << "capture_db = " << fmt_double(s.channel.capture_db) << "\n";
    o << "ideal_downlink = " << (s.channel.ideal_downlink ? "true" : "false") << "\n\n";

    o << "[traffic]\n";
    o << "payload_bytes = " << s.payload_bytes << "\n";
    o << "mean_interval_s = " << fmt_double(s.mean_interval_s) << "\n\n";

    o << "[mobility]\n";
    o << "mode = " << (s.mobility.mobile ? "random-waypoint" : "static") << "\n";
    o << "mean_speed_mps = " << fmt_double(s.mobility.mean_speed_mps) << "\n";
    o << "max_speed_mps = " << fmt_double(s.mobility.max_speed_mps) << "\n\n";

    o << "[strategy]\n";
    o << "strategies = ";
    for (std::size_t i = 0; i < s.strategies.size(); ++i)
        o << (i ? "," : "") << to_string(s.strategies[i]);
    o << "\n";
    o << "device_margin_db = " << fmt_double(s.device_margin_db) << "\n";
    o << "history_window = " << s.history_window << "\n";
    o << "decision_interval = " << s.decision_interval << "\n";
    o << "starvation_limit = " << s.starvation_limit << "\n\n";

    o << "[space]\n";
    o << "sf = ";
    for (std::size_t i = 0; i < s.dims.sf.size(); ++i) o << (i ? "," : "") << s.dims.sf[i];
    o << "\n";
    o << "tp = ";
    for (std::size_t i = 0; i < s.dims.tp.size(); ++i) o << (i ? "," : "") << s.dims.tp[i];
    o << "\n";
    o << "cf = ";
    for (std::size_t i = 0; i < s.dims.cf.size(); ++i) o << (i ? "," : "") << fmt_double(s.dims.cf[i]);
    o << "\n";
    o << "cr = ";
    for (std::size_t i = 0; i < s.dims.cr.size(); ++i)
        o << (i ? "," : "") << s.dims.cr[i].num << "/" << s.dims.cr[i].den;
    o << "\n";
    o << "bw_hz = " << s.dims.bw_hz << "\n\n";

    o << "[radio]\n";
    o << "p_on_w = " << fmt_double(s.radio.p_on_w) << "\n";
    o << "p_tx_w = ";
    bool first = true;
    for (const auto& [tp, w] : s.radio.p_tx_w) {
        o << (first ? "" : ",") << tp << ":" << fmt_double(w);
        first = false;
    }
    o << "\n";
    o << "n_preamble = " << s.radio.n_preamble << "\n";
    o << "header_disabled = " << s.radio.header_disabled << "\n";
    o << "ldro = " << s.radio.ldro << "\n";
    o << "ldro_auto = " << (s.radio.ldro_auto ? "true" : "false") << "\n";
    o << "airtime_mode = " << to_string(s.airtime_mode) << "\n\n";

    o << "[run]\n";
    o << "name = " << s.name << "\n";
    o << "horizon_s = " << fmt_double(s.horizon_s) << "\n";
    o << "replicates = " << s.replicates << "\n";
    o << "seed = " << s.seed << "\n";
    o << "sweep = " << to_string(s.sweep) << "\n";
    if (!s.sweep_values.empty()) {
        o << "sweep_values = ";
        for (std::size_t i = 0; i < s.sweep_values.size(); ++i)
            o << (i ? "," : "") << s.sweep_values[i];
        o << "\n";
    }
    return o.str();
}

// The four study scenarios at publication scale. Sigma values match the
// saturation steps of the measurement campaign the channel model came from.
inline Scenario preset_scenario(const std::string& name) {
    Scenario s;
    s.name = name;
    s.horizon_s = 12.0 * 86400.0;
    s.replicates = 25;
    if (name == "scenario1" || name == "scenario2") {
        s.sweep = SweepKind::num_eds;
        s.sweep_values = {"100", "200", "300", "400", "500", "600", "700"};
        s.mobility.mobile = (name == "scenario2");
    } else if (name == "scenario3") {
        s.sweep = SweepKind::sigma;
        s.sweep_values = {"0", "0.89", "1.78", "2.67", "3.56", "4.46", "5.36", "6.24", "7.08"};
    } else if (name == "scenario4") {
        s.sweep = SweepKind::space;
        s.sweep_values = {"config-1", "config-2", "config-3", "config-4"};
        s.horizon_s = 120.0 * 86400.0;
    } else {
        throw ScenarioError("unknown scenario preset: " + name);
    }
    return s;
}

inline bool is_preset_name(const std::string& name) {
    return name == "scenario1" || name == "scenario2" || name == "scenario3" ||
           name == "scenario4";
}

// Shrinks a scenario to something that finishes on a laptop: one simulated
// day, five replicates, and a trimmed sweep axis.
inline void apply_desk_scale(Scenario& s) {
    s.horizon_s = 86400.0;
    s.replicates = 5;
    if (s.sweep == SweepKind::num_eds) s.sweep_values = {"100", "300"};
    if (s.sweep == SweepKind::sigma) s.sweep_values = {"0", "3.56", "7.08"};
}

}  // namespace lorasim
