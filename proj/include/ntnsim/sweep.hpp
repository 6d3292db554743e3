#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ntnsim/config.hpp"
#include "ntnsim/metrics.hpp"

namespace ntnsim {

/// Base config plus (key, value-list) pairs expanded as a Cartesian
/// product, first key outermost. Expansion size is capped.
struct SweepSpec {
    ScenarioConfig base;
    std::vector<std::pair<std::string, std::vector<std::string>>> vary;
    std::size_t expansion_cap = 10000;
};

struct SweepPoint {
    std::string scenario_id;
    ScenarioConfig config;
};

/// Deterministic expansion order; scenario ids carry the varied
/// key=value assignments. Throws ConfigError on bad keys/values or when
/// the expansion exceeds the cap.
std::vector<SweepPoint> expand_sweep(const SweepSpec& spec, const std::string& base_id);

/// Runs every point, fanning out to `parallelism` workers. Reports come
/// back in expansion order regardless of completion order. A failed point
/// aborts the sweep with its config echoed in the error message.
std::vector<MetricsReport> run_sweep(const SweepSpec& spec, int parallelism,
                                     const std::string& base_id);

}  // namespace ntnsim
