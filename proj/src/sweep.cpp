#include "ntnsim/sweep.hpp"

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ntnsim/simulation.hpp"

namespace ntnsim {

std::vector<SweepPoint> expand_sweep(const SweepSpec& spec, const std::string& base_id) {
    std::size_t total = 1;
    for (const auto& [key, values] : spec.vary) {
        if (values.empty())
            throw ConfigError({{0, "sweep: empty value list for key '" + key + "'"}});
        total *= values.size();
        if (total > spec.expansion_cap)
            throw ConfigError({{0, "sweep: expansion exceeds the cap of " +
                                       std::to_string(spec.expansion_cap) + " points"}});
    }

    std::vector<SweepPoint> points;
    points.reserve(total);
    std::vector<std::size_t> index(spec.vary.size(), 0);
    for (std::size_t p = 0; p < total; ++p) {
        ScenarioConfig cfg = spec.base;
        std::string id = base_id;
        for (std::size_t k = 0; k < spec.vary.size(); ++k) {
            const auto& [key, values] = spec.vary[k];
            const std::string& value = values[index[k]];
            const std::string err = config_set_key(cfg, key, value);
            if (!err.empty()) throw ConfigError({{0, "sweep: " + err}});
            id += (k == 0 ? "/" : ",") + key + "=" + value;
        }
        const auto issues = validate_config(cfg);
        if (!issues.empty()) throw ConfigError(issues);
        points.push_back({std::move(id), std::move(cfg)});

        // Odometer increment, last key fastest.
        for (std::size_t k = spec.vary.size(); k-- > 0;) {
            if (++index[k] < spec.vary[k].second.size()) break;
            index[k] = 0;
        }
    }
    return points;
}

std::vector<MetricsReport> run_sweep(const SweepSpec& spec, int parallelism,
                                     const std::string& base_id) {
    const auto points = expand_sweep(spec, base_id);
    std::vector<MetricsReport> reports(points.size());

    const int workers = std::max(1, std::min<int>(parallelism, static_cast<int>(points.size())));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::string first_error;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            try {
                reports[i] = run_scenario(points[i].config, points[i].scenario_id);
            } catch (const std::exception& ex) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error.empty()) {
                    first_error = "sweep point '" + points[i].scenario_id +
                                  "' failed: " + ex.what() + "\nconfig:\n" +
                                  serialize_config(points[i].config);
                }
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    if (!first_error.empty()) throw std::runtime_error(first_error);
    return reports;
}

}  // namespace ntnsim
