#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ntnsim {

struct DropCounts {
    std::int64_t misalignment_bits = 0;
    std::int64_t bler_bits = 0;
    std::int64_t retx_exhaustion_bits = 0;
    std::int64_t queue_bits = 0;

    std::int64_t total() const {
        return misalignment_bits + bler_bits + retx_exhaustion_bits + queue_bits;
    }
};

struct FlowMetrics {
    std::string flow_id;
    std::string direction;  // dl | ul
    std::string role;       // data | feedback | ack
    double source_rate_mbps = 0.0;

    std::int64_t offered_bits = 0;
    std::int64_t delivered_bits = 0;
    DropCounts drops;
    std::int64_t residual_bits = 0;  // queued + in flight at the end of the run

    std::vector<double> latency_samples_s;  // sorted by finalize()
    double latency_mean_s = 0.0;
    double latency_p50_s = 0.0;
    double latency_p95_s = 0.0;
    double latency_p99_s = 0.0;
    double throughput_bps = 0.0;

    /// Sorts samples, fills the derived statistics.
    void finalize(double duration_s);

    bool conserved() const {
        return offered_bits == delivered_bits + drops.total() + residual_bits;
    }
};

/// Scenario parameters echoed into every CSV row of the report.
struct ScenarioEcho {
    double altitude_km = 0.0;
    std::string band;
    double bler = 0.0;
    std::string duplex_mode;
    double duration_s = 0.0;
    std::string gnss;
    double half_beamwidth_deg = 0.0;
    std::string harq_enabled;
    int harq_n = 0;
    int m_dl = 0;
    int n_gp = 0;
    int numerology = 0;
    std::string payload;
    std::string placement;
    std::uint64_t seed = 0;
    double tolerance_slots = 0.0;
    std::string transport;
    int ue_count = 0;
};

struct MetricsReport {
    std::string scenario_id;
    ScenarioEcho echo;
    std::vector<FlowMetrics> flows;
    double cell_throughput_bps = 0.0;  // delivered data flows only
    int harq_violations = 0;

    bool conserved() const;
    const FlowMetrics* find_flow(const std::string& flow_id) const;
};

/// Nearest-rank percentile over a sorted sample vector; q in (0, 1].
double percentile_sorted(const std::vector<double>& sorted, double q);

/// Frozen CSV schema: identifier columns, then parameters, then metrics,
/// alphabetical within each group. See the README for the exact order.
std::string csv_header();
void append_csv_rows(std::string& out, const MetricsReport& report);
std::string to_csv(const std::vector<MetricsReport>& reports);

}  // namespace ntnsim
