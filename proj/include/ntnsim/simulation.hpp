#pragma once

#include <string>
#include <vector>

#include "ntnsim/config.hpp"
#include "ntnsim/geometry.hpp"
#include "ntnsim/metrics.hpp"

namespace ntnsim {

/// UE drop per the configured placement mode, inside the beam footprint
/// anchored at the sub-satellite point of t = 0. cell_center keeps every UE
/// within 1% of the cell radius; uniform is area-uniform over the spherical
/// cap. Draws come from the (seed, "placement") stream, normalized so the
/// same seed lands UEs at the same relative cell positions at every
/// altitude.
std::vector<GroundPosition> place_ues(const ScenarioConfig& cfg);

/// Feeder gateway ground point, placed west of the t = 0 sub-satellite
/// point at the configured elevation angle.
GroundPosition gateway_position(const ScenarioConfig& cfg);

/// RAN round-trip time seen by the retransmission timers at time t:
/// transparent payloads cross feeder and service legs both ways,
/// regenerative only the service leg. Throws on link outage (satellite
/// below the horizon).
double rtt_for(const ScenarioConfig& cfg, const GroundPosition& ue, double t_s);

/// Runs one scenario to completion. Identical (config, seed) pairs produce
/// bit-identical reports.
MetricsReport run_scenario(const ScenarioConfig& cfg, const std::string& scenario_id = "run");

}  // namespace ntnsim
