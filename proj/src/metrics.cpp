#include "ntnsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace ntnsim {

double percentile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    if (q <= 0.0 || q > 1.0) throw std::invalid_argument("percentile: q must be in (0, 1]");
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    return sorted[std::max<std::size_t>(rank, 1) - 1];
}

void FlowMetrics::finalize(double duration_s) {
    std::sort(latency_samples_s.begin(), latency_samples_s.end());
    if (!latency_samples_s.empty()) {
        latency_mean_s = std::accumulate(latency_samples_s.begin(), latency_samples_s.end(), 0.0) /
                         static_cast<double>(latency_samples_s.size());
        latency_p50_s = percentile_sorted(latency_samples_s, 0.50);
        latency_p95_s = percentile_sorted(latency_samples_s, 0.95);
        latency_p99_s = percentile_sorted(latency_samples_s, 0.99);
    }
    throughput_bps = duration_s > 0.0 ? static_cast<double>(delivered_bits) / duration_s : 0.0;
}

bool MetricsReport::conserved() const {
    return std::all_of(flows.begin(), flows.end(),
                       [](const FlowMetrics& f) { return f.conserved(); });
}

const FlowMetrics* MetricsReport::find_flow(const std::string& flow_id) const {
    for (const auto& f : flows) {
        if (f.flow_id == flow_id) return &f;
    }
    return nullptr;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string csv_header() {
    return "flow_id,scenario_id,"
           "altitude_km,band,bler,direction,duplex_mode,duration_s,gnss,half_beamwidth_deg,"
           "harq_enabled,harq_n,m_dl,n_gp,numerology,payload,placement,rate_mbps,seed,"
           "tolerance_slots,transport,ue_count,"
           "delivered_bits,drops_bler_bits,drops_misalignment_bits,drops_queue_bits,"
           "drops_retx_exhaustion_bits,latency_mean_ms,latency_p50_ms,latency_p95_ms,"
           "latency_p99_ms,offered_bits,residual_bits,throughput_mbps";
}

void append_csv_rows(std::string& out, const MetricsReport& report) {
    const auto& e = report.echo;
    for (const auto& f : report.flows) {
        out += f.flow_id;
        out += ',';
        out += report.scenario_id;
        out += ',';
        out += fmt_double(e.altitude_km) + ',' + e.band + ',' + fmt_double(e.bler) + ',' +
               f.direction + ',' + e.duplex_mode + ',' + fmt_double(e.duration_s) + ',' + e.gnss +
               ',' + fmt_double(e.half_beamwidth_deg) + ',' + e.harq_enabled + ',' +
               std::to_string(e.harq_n) + ',' + std::to_string(e.m_dl) + ',' +
               std::to_string(e.n_gp) + ',' + std::to_string(e.numerology) + ',' + e.payload +
               ',' + e.placement + ',' + fmt_double(f.source_rate_mbps) + ',' +
               std::to_string(e.seed) + ',' + fmt_double(e.tolerance_slots) + ',' + e.transport +
               ',' + std::to_string(e.ue_count) + ',';
        out += std::to_string(f.delivered_bits) + ',' + std::to_string(f.drops.bler_bits) + ',' +
               std::to_string(f.drops.misalignment_bits) + ',' +
               std::to_string(f.drops.queue_bits) + ',' +
               std::to_string(f.drops.retx_exhaustion_bits) + ',' +
               fmt_double(f.latency_mean_s * 1e3) + ',' + fmt_double(f.latency_p50_s * 1e3) + ',' +
               fmt_double(f.latency_p95_s * 1e3) + ',' + fmt_double(f.latency_p99_s * 1e3) + ',' +
               std::to_string(f.offered_bits) + ',' + std::to_string(f.residual_bits) + ',' +
               fmt_double(f.throughput_bps / 1e6);
        out += '\n';
    }
}

std::string to_csv(const std::vector<MetricsReport>& reports) {
    std::string out = csv_header();
    out += '\n';
    for (const auto& r : reports) append_csv_rows(out, r);
    return out;
}

}  // namespace ntnsim
