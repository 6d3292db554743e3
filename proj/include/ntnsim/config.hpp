#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ntnsim/channel.hpp"

namespace ntnsim {

enum class PayloadType { Transparent, Regenerative };
enum class DuplexMode { Tdd, Fdd };
enum class Placement { CellCenter, Uniform };
enum class TransportKind { Udp, Tcp };
enum class Direction { Dl, Ul };

std::string to_string(PayloadType v);
std::string to_string(DuplexMode v);
std::string to_string(Placement v);
std::string to_string(TransportKind v);
std::string to_string(Direction v);

/// Complete declarative description of one experiment. Parsed from the
/// line-based `section.key = value` text format (see README); every key is
/// range checked and unknown keys are hard errors.
struct ScenarioConfig {
    struct Satellite {
        double altitude_km = 600.0;
        PayloadType payload = PayloadType::Transparent;
        double gateway_elevation_deg = 10.0;
        bool operator==(const Satellite&) const = default;
    } satellite;

    struct BandSection {
        BandName name = BandName::S;
        double f_c_ghz = 0.0;  // 0 = band default
        double bandwidth_mhz = 25.0;
        bool operator==(const BandSection&) const = default;
    } band;

    struct Phy {
        int numerology = -1;  // -1 = band default
        bool operator==(const Phy&) const = default;
    } phy;

    struct Duplex {
        DuplexMode mode = DuplexMode::Fdd;
        int m_dl = 7;
        int n_gp = 0;
        bool operator==(const Duplex&) const = default;
    } duplex;

    struct Ta {
        bool gnss = true;
        double tolerance_slots = 1.0;
        bool operator==(const Ta&) const = default;
    } ta;

    struct Harq {
        bool enabled = true;
        int n = 16;
        int max_retx = 3;
        int processing_slots = 4;
        bool operator==(const Harq&) const = default;
    } harq;

    struct Channel {
        double bler = 0.0;
        double margin_db = 0.0;
        double tx_power_dbm = 33.0;
        double tx_gain_dbi = 43.2;
        double rx_gain_dbi = 39.7;
        double noise_figure_db = 7.0;
        double temperature_k = 290.0;
        bool operator==(const Channel&) const = default;
    } channel;

    struct Transport {
        TransportKind kind = TransportKind::Udp;
        double rate_mbps = 10.0;
        int packet_bytes = 1500;
        Direction direction = Direction::Dl;
        double feedback_kbps = 0.0;  // > 0 adds a reverse-direction UDP flow
        int feedback_packet_bytes = 100;
        double start_s = 0.0;
        bool operator==(const Transport&) const = default;
    } transport;

    struct Tcp {
        double rto_ms = 200.0;
        bool rto_adaptive = false;
        double cubic_c = 0.4;
        double cubic_beta = 0.3;
        bool operator==(const Tcp&) const = default;
    } tcp;

    struct Ues {
        int count = 1;
        Placement placement = Placement::CellCenter;
        double half_beamwidth_deg = 0.0;  // 0 = auto: min(40 deg, 0.95 * limb)
        bool operator==(const Ues&) const = default;
    } ues;

    struct Sim {
        double duration_s = 10.0;
        std::uint64_t seed = 1;
        bool operator==(const Sim&) const = default;
    } sim;

    // Overrides the default 15-step table when non-empty.
    std::vector<std::pair<double, double>> rate_table;

    bool operator==(const ScenarioConfig&) const = default;

    // Resolved views of the auto fields.
    double f_c_hz() const;
    int numerology_resolved() const;
    double half_beamwidth_deg_resolved() const;
    RateTable rate_table_resolved() const;
    LinkBudgetConfig link_budget() const;
    double bandwidth_hz() const { return band.bandwidth_mhz * 1e6; }
};

struct ConfigIssue {
    int line;  // 0 when the issue is not tied to a single line
    std::string message;
};

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

  private:
    static std::string join(const std::vector<ConfigIssue>& issues);
    std::vector<ConfigIssue> issues_;
};

/// Parses and validates; throws ConfigError listing every problem with its
/// line number.
ScenarioConfig parse_config(const std::string& text);

/// Applies one `section.key = value` assignment; used by the parser and by
/// sweep expansion. Returns an error message, or empty on success.
std::string config_set_key(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Range and cross-field checks; issues use line 0.
std::vector<ConfigIssue> validate_config(const ScenarioConfig& cfg);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace ntnsim
