#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "lorasim/lorasim.hpp"

namespace {

lorasim::Scenario load_scenario(const std::string& ref) {
    if (lorasim::is_preset_name(ref)) return lorasim::preset_scenario(ref);
    std::ifstream f(ref);
    if (!f) throw lorasim::ScenarioError("cannot open scenario file: " + ref);
    std::ostringstream ss;
    ss << f.rdbuf();
    return lorasim::parse_scenario_text(ss.str());
}

// Either a named preset or explicit axes like
// "sf=7,8;tp=2,14;cf=868.1;cr=4/5,4/8".
lorasim::ConfigDimensions parse_dims(const std::string& spec) {
    if (spec.rfind("config-", 0) == 0) return lorasim::dimension_preset(spec);
    lorasim::ConfigDimensions d;
    for (const auto& part : lorasim::detail::split(spec, ';')) {
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos)
            throw lorasim::ScenarioError("dims: expected axis=values, got '" + part + "'");
        const std::string axis = lorasim::detail::trim(part.substr(0, eq));
        const std::string vals = lorasim::detail::trim(part.substr(eq + 1));
        if (axis == "sf") {
            d.sf.clear();
            for (const auto& v : lorasim::detail::split(vals, ','))
                d.sf.push_back(static_cast<int>(lorasim::detail::parse_int("dims.sf", v)));
        } else if (axis == "tp") {
            d.tp.clear();
            for (const auto& v : lorasim::detail::split(vals, ','))
                d.tp.push_back(static_cast<int>(lorasim::detail::parse_int("dims.tp", v)));
        } else if (axis == "cf") {
            d.cf.clear();
            for (const auto& v : lorasim::detail::split(vals, ','))
                d.cf.push_back(lorasim::detail::parse_double("dims.cf", v));
        } else if (axis == "cr") {
            d.cr.clear();
            for (const auto& v : lorasim::detail::split(vals, ','))
                d.cr.push_back(lorasim::detail::parse_cr("dims.cr", v));
        } else {
            throw lorasim::ScenarioError("dims: unknown axis '" + axis + "'");
        }
    }
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-gateway LoRa network simulator with adaptive data-rate strategies"};
    app.require_subcommand(1);

    std::string scenario_ref, out_dir, airtime, dims_spec = "config-1";
    int jobs = 0, payload = 20;
    std::uint64_t seed = 0;
    bool have_seed = false, desk_scale = false, ideal_downlink = false, trace = false;

    auto* run = app.add_subcommand("run", "Run a scenario and write CSV results");
    run->add_option("--scenario", scenario_ref, "Scenario file or preset scenario1..scenario4")
        ->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--jobs", jobs, "Worker threads (default: all cores)");
    run->add_option("--seed", seed, "Override the master seed")
        ->each([&](const std::string&) { have_seed = true; });
    run->add_flag("--desk-scale", desk_scale, "Shrink horizon/replicates/sweep for a quick run");
    run->add_option("--airtime-mode", airtime, "fractional|semtech symbol rounding");
    run->add_flag("--ideal-downlink", ideal_downlink, "Deliver every downlink");
    run->add_flag("--trace", trace, "Write per-frame and per-decision CSV traces");

    auto* dump = app.add_subcommand("dump-space", "Print the energy-sorted config space as CSV");
    dump->add_option("--dims", dims_spec, "config-1..config-4 or sf=..;tp=..;cf=..;cr=..");
    std::string dump_airtime = "fractional";
    dump->add_option("--airtime-mode", dump_airtime, "fractional|semtech symbol rounding");
    dump->add_option("--payload", payload, "Payload size in bytes (default 20)");

    std::string validate_ref;
    auto* validate = app.add_subcommand("validate", "Parse a scenario and echo its canonical form");
    validate->add_option("--scenario", validate_ref, "Scenario file or preset name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            lorasim::Scenario s = load_scenario(scenario_ref);
            if (have_seed) s.seed = seed;
            if (desk_scale) lorasim::apply_desk_scale(s);
            if (!airtime.empty()) s.airtime_mode = lorasim::airtime_mode_from_string(airtime);
            if (ideal_downlink) s.channel.ideal_downlink = true;
            lorasim::validate_scenario(s);

            lorasim::RunOptions opts{jobs, trace, out_dir};
            const auto outcome = lorasim::run_scenario(s, opts);

            std::cout << "strategy sweep_value replicates pdr_mean pdr_ci95 ec_mean_j ec_ci95_j\n";
            for (const auto& a : outcome.aggregates) {
                auto field = [](const std::optional<double>& v) {
                    return v ? lorasim::fmt_double(*v) : std::string("-");
                };
                std::cout << lorasim::to_string(a.strategy) << ' '
                          << (a.sweep_key.empty() ? "-" : a.sweep_key) << ' ' << a.replicates
                          << ' ' << field(a.pdr_mean) << ' ' << field(a.pdr_ci95) << ' '
                          << field(a.ec_mean) << ' ' << field(a.ec_ci95) << '\n';
            }
            if (!outcome.ok) {
                std::size_t failed = 0;
                for (const auto& r : outcome.records)
                    if (!r.error.empty()) {
                        ++failed;
                        std::cerr << "failed: " << lorasim::to_string(r.strategy) << " "
                                  << r.sweep_key << " replicate " << r.replicate << ": "
                                  << r.error << "\n";
                    }
                std::cerr << failed << " of " << outcome.records.size()
                          << " runs failed; see failures.csv\n";
                return 1;
            }
            std::cout << "results written to " << out_dir << "\n";
            return 0;
        }

        if (dump->parsed()) {
            const auto mode = lorasim::airtime_mode_from_string(dump_airtime);
            lorasim::RadioParams radio;
            radio.payload_bytes = payload;
            const lorasim::ConfigSpace space(parse_dims(dims_spec), radio, mode);
            std::cout << "index,sf,tp,cf_mhz,cr,toa_s,energy_j\n";
            for (int i = 1; i <= space.size(); ++i) {
                const auto& c = space.config_at(i);
                std::cout << i << ',' << c.sf << ',' << c.tp_dbm << ','
                          << lorasim::fmt_double(c.cf_mhz) << ',' << c.cr.num << '/' << c.cr.den
                          << ',' << lorasim::fmt_double(space.toa_at(i)) << ','
                          << lorasim::fmt_double(space.energy_at(i)) << '\n';
            }
            return 0;
        }

        if (validate->parsed()) {
            const lorasim::Scenario s = load_scenario(validate_ref);
            lorasim::validate_scenario(s);
            std::cout << lorasim::serialize_scenario(s);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
