#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lorasim/scenario.hpp"
#include "lorasim/simulation.hpp"

namespace lorasim {

struct RunRecord {
    std::string scenario;
    Strategy strategy;
    std::string sweep_key;
    int num_eds = 0;
    double sigma_db = 0.0;
    int replicate = 0;
    std::uint64_t seed = 0;
    std::uint64_t packets_sent = 0;
    std::uint64_t packets_received = 0;
    std::optional<double> pdr;
    double total_energy_j = 0.0;
    std::optional<double> ec_j;
    std::string error;  // non-empty when the replicate failed
};

struct Aggregate {
    Strategy strategy;
    std::string sweep_key;
    int replicates = 0;
    std::optional<double> pdr_mean, pdr_ci95;
    std::optional<double> ec_mean, ec_ci95;
};

struct RunOutcome {
    std::vector<RunRecord> records;
    std::vector<Aggregate> aggregates;
    bool ok = true;
};

struct RunOptions {
    int jobs = 0;  // 0: one thread per hardware core
    bool trace = false;
    std::string out_dir;  // empty: do not write files
};

namespace detail {

struct MeanCi {
    std::optional<double> mean, ci95;
    int n = 0;
};

inline MeanCi mean_ci(const std::vector<double>& xs) {
    MeanCi r;
    r.n = static_cast<int>(xs.size());
    if (xs.empty()) return r;
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / r.n;
    r.mean = mean;
    if (r.n >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        const double sd = std::sqrt(ss / (r.n - 1));
        r.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(r.n));
    }
    return r;
}

inline std::string opt_field(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string{};
}

inline std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) out.push_back((std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_');
    return out.empty() ? std::string("all") : out;
}

inline void write_trace_csv(const std::filesystem::path& path, const SimResult& res) {
    std::ofstream f(path);
    f << "time_s,ed,config_index,sf,tp_dbm,cf_mhz,rx_dbm,snr_db,outcome\n";
    for (const auto& r : res.trace) {
        const char* outcome = r.received ? "ok"
                              : r.cause == LossCause::collision ? "collision"
                                                                : "below_sensitivity";
        f << fmt_double(r.time_s) << ',' << r.ed << ',' << r.config_index << ',' << r.sf << ','
          << r.tp_dbm << ',' << fmt_double(r.cf_mhz) << ',' << fmt_double(r.rx_dbm) << ','
          << fmt_double(r.snr_db) << ',' << outcome << '\n';
    }
}

inline void write_decisions_csv(const std::filesystem::path& path, const SimResult& res) {
    std::ofstream f(path);
    f << "time_s,ed,received_index,matched,assign_index,assign_sf,assign_tp_dbm\n";
    for (const auto& d : res.decisions)
        f << fmt_double(d.time_s) << ',' << d.ed << ',' << d.received_index << ','
          << (d.matched ? 1 : 0) << ',' << d.assign_index << ',' << d.assign_sf << ','
          << d.assign_tp_dbm << '\n';
    f << "# downlinks: time_s,ed,assign_sf,assign_tp_dbm,delivered,applied\n";
    for (const auto& d : res.downlinks)
        f << fmt_double(d.time_s) << ',' << d.ed << ',' << d.assign_sf << ',' << d.assign_tp_dbm
          << ',' << (d.delivered ? 1 : 0) << ',' << (d.applied ? 1 : 0) << '\n';
}

}  // namespace detail

inline SimParams sim_params_for(const Scenario& s, const SweepCell& cell, Strategy strategy,
                                const ConfigSpace& space, int replicate) {
    SimParams p;
    p.num_eds = cell.num_eds;
    p.cell_m = s.cell_m;
    p.gateway = s.gateway();
    p.channel = s.channel;
    p.channel.sigma_db = cell.sigma_db;
    p.mobility = s.mobility;
    p.mean_interval_s = s.mean_interval_s;
    p.strategy = strategy;
    p.device_margin_db = s.device_margin_db;
    p.history_window = s.history_window;
    p.decision_interval = s.decision_interval;
    p.starvation_limit = s.starvation_limit;
    p.horizon_s = s.horizon_s;
    p.space = &space;
    p.seed = derive_seed(s.seed, to_string(strategy), cell.key,
                         static_cast<std::uint64_t>(replicate));
    return p;
}

// Runs the full (sweep value x strategy x replicate) grid. Output order is
// fixed by the scenario regardless of thread count or completion order.
inline RunOutcome run_scenario(const Scenario& s, const RunOptions& opts = {}) {
    validate_scenario(s);
    const auto cells = expand_sweep(s);

    std::vector<std::unique_ptr<ConfigSpace>> spaces;
    spaces.reserve(cells.size());
    for (const auto& cell : cells)
        spaces.push_back(std::make_unique<ConfigSpace>(cell.dims, s.radio, s.airtime_mode));

    struct Job {
        std::size_t cell;
        Strategy strategy;
        int replicate;
    };
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (Strategy st : s.strategies)
            for (int r = 0; r < s.replicates; ++r) jobs.push_back({c, st, r});

    RunOutcome out;
    out.records.resize(jobs.size());

    const bool write_files = !opts.out_dir.empty();
    std::filesystem::path dir(opts.out_dir);
    if (write_files) std::filesystem::create_directories(dir);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const Job& job = jobs[j];
            const SweepCell& cell = cells[job.cell];
            RunRecord rec;
            rec.scenario = s.name;
            rec.strategy = job.strategy;
            rec.sweep_key = cell.key;
            rec.num_eds = cell.num_eds;
            rec.sigma_db = cell.sigma_db;
            rec.replicate = job.replicate;
            try {
                SimParams p = sim_params_for(s, cell, job.strategy, *spaces[job.cell], job.replicate);
                p.collect_trace = opts.trace;
                rec.seed = p.seed;
                Simulation sim(p);
                const SimResult res = sim.run();
                rec.packets_sent = res.metrics.packets_sent;
                rec.packets_received = res.metrics.packets_received;
                rec.pdr = res.metrics.pdr();
                rec.total_energy_j = res.metrics.total_energy_j;
                rec.ec_j = res.metrics.energy_cost();
                if (opts.trace && write_files) {
                    const std::string stem = detail::sanitize(to_string(job.strategy)) + "_" +
                                             detail::sanitize(cell.key) + "_r" +
                                             std::to_string(job.replicate);
                    detail::write_trace_csv(dir / ("trace_" + stem + ".csv"), res);
                    detail::write_decisions_csv(dir / ("decisions_" + stem + ".csv"), res);
                }
            } catch (const std::exception& ex) {
                rec.error = ex.what();
            }
            out.records[j] = std::move(rec);
        }
    };

    int n_threads = opts.jobs > 0 ? opts.jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    if (static_cast<std::size_t>(n_threads) > jobs.size()) n_threads = static_cast<int>(jobs.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& rec : out.records)
        if (!rec.error.empty()) out.ok = false;

    // Aggregates follow (strategy, sweep value) in scenario order.
    for (Strategy st : s.strategies) {
        for (const auto& cell : cells) {
            std::vector<double> pdrs, ecs;
            int n = 0;
            for (const auto& rec : out.records) {
                if (rec.strategy != st || rec.sweep_key != cell.key || !rec.error.empty()) continue;
                ++n;
                if (rec.pdr) pdrs.push_back(*rec.pdr);
                if (rec.ec_j) ecs.push_back(*rec.ec_j);
            }
            Aggregate a;
            a.strategy = st;
            a.sweep_key = cell.key;
            a.replicates = n;
            const auto p = detail::mean_ci(pdrs);
            const auto e = detail::mean_ci(ecs);
            a.pdr_mean = p.mean;
            a.pdr_ci95 = p.ci95;
            a.ec_mean = e.mean;
            a.ec_ci95 = e.ci95;
            out.aggregates.push_back(std::move(a));
        }
    }

    if (write_files) {
        {
            std::ofstream f(dir / "scenario.ini");
            f << serialize_scenario(s);
        }
        {
            std::ofstream f(dir / "results.csv");
            f << "scenario,strategy,sweep,sweep_value,num_eds,sigma_db,replicate,seed,"
                 "airtime_mode,packets_sent,packets_received,pdr,total_energy_j,ec_j\n";
            for (const auto& r : out.records) {
                if (!r.error.empty()) continue;
                f << r.scenario << ',' << to_string(r.strategy) << ',' << to_string(s.sweep) << ','
                  << r.sweep_key << ',' << r.num_eds << ',' << fmt_double(r.sigma_db) << ','
                  << r.replicate << ',' << r.seed << ',' << to_string(s.airtime_mode) << ','
                  << r.packets_sent << ',' << r.packets_received << ','
                  << detail::opt_field(r.pdr) << ',' << fmt_double(r.total_energy_j) << ','
                  << detail::opt_field(r.ec_j) << '\n';
            }
        }
        {
            std::ofstream f(dir / "aggregate.csv");
            f << "scenario,strategy,sweep,sweep_value,replicates,pdr_mean,pdr_ci95,ec_mean,ec_ci95\n";
            for (const auto& a : out.aggregates)
                f << s.name << ',' << to_string(a.strategy) << ',' << to_string(s.sweep) << ','
                  << a.sweep_key << ',' << a.replicates << ',' << detail::opt_field(a.pdr_mean)
                  << ',' << detail::opt_field(a.pdr_ci95) << ',' << detail::opt_field(a.ec_mean)
                  << ',' << detail::opt_field(a.ec_ci95) << '\n';
        }
        {
            // Gnuplot-style long format: one block of rows per strategy, the
            // swept value on the x axis, PDR and EC series side by side.
            std::ofstream f(dir / (detail::sanitize(s.name) + "_plot.dat"));
            f << "# x(" << to_string(s.sweep) << ") strategy pdr_mean pdr_ci95 ec_mean(J) ec_ci95(J)\n";
            for (const auto& a : out.aggregates) {
                f << (a.sweep_key.empty() ? "-" : a.sweep_key) << ' ' << to_string(a.strategy);
                auto field = [&](const std::optional<double>& v) {
                    f << ' ' << (v ? fmt_double(*v) : std::string("nan"));
                };
                field(a.pdr_mean);
                field(a.pdr_ci95);
                field(a.ec_mean);
                field(a.ec_ci95);
                f << '\n';
            }
        }
        if (!out.ok) {
            std::ofstream f(dir / "failures.csv");
            f << "strategy,sweep_value,replicate,error\n";
            for (const auto& r : out.records)
                if (!r.error.empty())
                    f << to_string(r.strategy) << ',' << r.sweep_key << ',' << r.replicate << ','
                      << r.error << '\n';
        }
    }
    return out;
}

}  // namespace lorasim
