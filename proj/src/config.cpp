#include "ntnsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "ntnsim/geometry.hpp"

namespace ntnsim {

std::string to_string(PayloadType v) {
    return v == PayloadType::Transparent ? "transparent" : "regenerative";
}
std::string to_string(DuplexMode v) { return v == DuplexMode::Tdd ? "tdd" : "fdd"; }
std::string to_string(Placement v) {
    return v == Placement::CellCenter ? "cell_center" : "uniform";
}
std::string to_string(TransportKind v) { return v == TransportKind::Udp ? "udp" : "tcp"; }
std::string to_string(Direction v) { return v == Direction::Dl ? "dl" : "ul"; }

double ScenarioConfig::f_c_hz() const {
    return band.f_c_ghz > 0.0 ? band.f_c_ghz * 1e9 : band_default_f_c_hz(band.name);
}

int ScenarioConfig::numerology_resolved() const {
    return phy.numerology >= 0 ? phy.numerology : band_default_numerology(band.name);
}

double ScenarioConfig::half_beamwidth_deg_resolved() const {
    if (ues.half_beamwidth_deg > 0.0) return ues.half_beamwidth_deg;
    return std::min(40.0, 0.95 * earth_limb_angle_deg(satellite.altitude_km));
}

RateTable ScenarioConfig::rate_table_resolved() const {
    return rate_table.empty() ? default_rate_table() : RateTable{rate_table};
}

LinkBudgetConfig ScenarioConfig::link_budget() const {
    LinkBudgetConfig b;
    b.tx_power_dbm = channel.tx_power_dbm;
    b.tx_gain_dbi = channel.tx_gain_dbi;
    b.rx_gain_dbi = channel.rx_gain_dbi;
    b.atmospheric_margin_db = channel.margin_db;
    b.noise_figure_db = channel.noise_figure_db;
    b.temperature_k = channel.temperature_k;
    return b;
}

std::string ConfigError::join(const std::vector<ConfigIssue>& issues) {
    std::string out = "config error";
    for (const auto& issue : issues) {
        out += "\n  ";
        if (issue.line > 0) out += "line " + std::to_string(issue.line) + ": ";
        out += issue.message;
    }
    return out;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& v, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(v, &pos);
        return pos == v.size() && std::isfinite(out);
    } catch (...) {
        return false;
    }
}

bool parse_int(const std::string& v, int& out) {
    try {
        std::size_t pos = 0;
        const long parsed = std::stol(v, &pos);
        if (pos != v.size()) return false;
        out = static_cast<int>(parsed);
        return static_cast<long>(out) == parsed;
    } catch (...) {
        return false;
    }
}

bool parse_u64(const std::string& v, std::uint64_t& out) {
    try {
        std::size_t pos = 0;
        out = std::stoull(v, &pos);
        return pos == v.size();
    } catch (...) {
        return false;
    }
}

bool parse_on_off(const std::string& v, bool& out) {
    if (v == "on") { out = true; return true; }
    if (v == "off") { out = false; return true; }
    return false;
}

std::string set_double(const std::string& key, const std::string& value, double& field) {
    if (!parse_double(value, field)) return key + ": expected a number, got '" + value + "'";
    return "";
}

std::string set_auto_double(const std::string& key, const std::string& value, double& field) {
    if (value == "auto") { field = 0.0; return ""; }
    return set_double(key, value, field);
}

std::string set_int(const std::string& key, const std::string& value, int& field) {
    if (!parse_int(value, field)) return key + ": expected an integer, got '" + value + "'";
    return "";
}

std::string set_on_off(const std::string& key, const std::string& value, bool& field) {
    if (!parse_on_off(value, field)) return key + ": expected on|off, got '" + value + "'";
    return "";
}

}  // namespace

std::string config_set_key(ScenarioConfig& cfg, const std::string& key,
                           const std::string& value) {
    if (key.rfind("rate_table.", 0) == 0) {
        const std::string snr_text = key.substr(std::string("rate_table.").size());
        double snr = 0.0, eff = 0.0;
        if (!parse_double(snr_text, snr))
            return key + ": rate_table key must be an SNR in dB";
        if (!parse_double(value, eff) || eff <= 0.0)
            return key + ": expected a positive spectral efficiency, got '" + value + "'";
        cfg.rate_table.emplace_back(snr, eff);
        return "";
    }

    if (key == "satellite.altitude_km") return set_double(key, value, cfg.satellite.altitude_km);
    if (key == "satellite.payload") {
        if (value == "transparent") cfg.satellite.payload = PayloadType::Transparent;
        else if (value == "regenerative") cfg.satellite.payload = PayloadType::Regenerative;
        else return key + ": expected transparent|regenerative, got '" + value + "'";
        return "";
    }
    if (key == "satellite.gateway_elevation_deg")
        return set_double(key, value, cfg.satellite.gateway_elevation_deg);

    if (key == "band.name") {
        if (value == "L") cfg.band.name = BandName::L;
        else if (value == "S") cfg.band.name = BandName::S;
        else if (value == "Ku") cfg.band.name = BandName::Ku;
        else if (value == "Ka") cfg.band.name = BandName::Ka;
        else return key + ": expected L|S|Ku|Ka, got '" + value + "'";
        return "";
    }
    if (key == "band.f_c_ghz") return set_auto_double(key, value, cfg.band.f_c_ghz);
    if (key == "band.bandwidth_mhz") return set_double(key, value, cfg.band.bandwidth_mhz);

    if (key == "phy.numerology") {
        if (value == "auto") { cfg.phy.numerology = -1; return ""; }
        return set_int(key, value, cfg.phy.numerology);
    }

    if (key == "duplex.mode") {
        if (value == "tdd") cfg.duplex.mode = DuplexMode::Tdd;
        else if (value == "fdd") cfg.duplex.mode = DuplexMode::Fdd;
        else return key + ": expected tdd|fdd, got '" + value + "'";
        return "";
    }
    if (key == "duplex.m_dl") return set_int(key, value, cfg.duplex.m_dl);
    if (key == "duplex.n_gp") return set_int(key, value, cfg.duplex.n_gp);

    if (key == "ta.gnss") return set_on_off(key, value, cfg.ta.gnss);
    if (key == "ta.tolerance_slots") return set_double(key, value, cfg.ta.tolerance_slots);

    if (key == "harq.enabled") return set_on_off(key, value, cfg.harq.enabled);
    if (key == "harq.n") {
        // `off` is accepted for sweep convenience and disables feedback.
        if (value == "off") { cfg.harq.enabled = false; return ""; }
        return set_int(key, value, cfg.harq.n);
    }
    if (key == "harq.max_retx") return set_int(key, value, cfg.harq.max_retx);
    if (key == "harq.processing_slots") return set_int(key, value, cfg.harq.processing_slots);

    if (key == "channel.bler") return set_double(key, value, cfg.channel.bler);
    if (key == "channel.margin_db") return set_double(key, value, cfg.channel.margin_db);
    if (key == "channel.tx_power_dbm") return set_double(key, value, cfg.channel.tx_power_dbm);
    if (key == "channel.tx_gain_dbi") return set_double(key, value, cfg.channel.tx_gain_dbi);
    if (key == "channel.rx_gain_dbi") return set_double(key, value, cfg.channel.rx_gain_dbi);
    if (key == "channel.noise_figure_db")
        return set_double(key, value, cfg.channel.noise_figure_db);
    if (key == "channel.temperature_k") return set_double(key, value, cfg.channel.temperature_k);

    if (key == "transport.kind") {
        if (value == "udp") cfg.transport.kind = TransportKind::Udp;
        else if (value == "tcp") cfg.transport.kind = TransportKind::Tcp;
        else return key + ": expected udp|tcp, got '" + value + "'";
        return "";
    }
    if (key == "transport.rate_mbps") return set_double(key, value, cfg.transport.rate_mbps);
    if (key == "transport.packet_bytes") return set_int(key, value, cfg.transport.packet_bytes);
    if (key == "transport.direction") {
        if (value == "dl") cfg.transport.direction = Direction::Dl;
        else if (value == "ul") cfg.transport.direction = Direction::Ul;
        else return key + ": expected dl|ul, got '" + value + "'";
        return "";
    }
    if (key == "transport.feedback_kbps") return set_double(key, value, cfg.transport.feedback_kbps);
    if (key == "transport.feedback_packet_bytes")
        return set_int(key, value, cfg.transport.feedback_packet_bytes);
    if (key == "transport.start_s") return set_double(key, value, cfg.transport.start_s);

    if (key == "tcp.rto_ms") return set_double(key, value, cfg.tcp.rto_ms);
    if (key == "tcp.rto_adaptive") return set_on_off(key, value, cfg.tcp.rto_adaptive);
    if (key == "tcp.cubic_c") return set_double(key, value, cfg.tcp.cubic_c);
    if (key == "tcp.cubic_beta") return set_double(key, value, cfg.tcp.cubic_beta);

    if (key == "ues.count") return set_int(key, value, cfg.ues.count);
    if (key == "ues.placement") {
        if (value == "cell_center") cfg.ues.placement = Placement::CellCenter;
        else if (value == "uniform") cfg.ues.placement = Placement::Uniform;
        else return key + ": expected cell_center|uniform, got '" + value + "'";
        return "";
    }
    if (key == "ues.half_beamwidth_deg")
        return set_auto_double(key, value, cfg.ues.half_beamwidth_deg);

    if (key == "sim.duration_s") return set_double(key, value, cfg.sim.duration_s);
    if (key == "sim.seed") {
        if (!parse_u64(value, cfg.sim.seed))
            return key + ": expected an unsigned integer, got '" + value + "'";
        return "";
    }

    return "unknown key '" + key + "'";
}

std::vector<ConfigIssue> validate_config(const ScenarioConfig& cfg) {
    std::vector<ConfigIssue> issues;
    auto bad = [&issues](const std::string& msg) { issues.push_back({0, msg}); };

    if (cfg.satellite.altitude_km <= 0.0 || cfg.satellite.altitude_km > 500000.0)
        bad("satellite.altitude_km: must be in (0, 500000]");
    if (cfg.satellite.gateway_elevation_deg < 0.0 || cfg.satellite.gateway_elevation_deg > 90.0)
        bad("satellite.gateway_elevation_deg: must be in [0, 90]");

    if (cfg.band.f_c_ghz < 0.0) bad("band.f_c_ghz: must be positive or auto");
    if (cfg.band.bandwidth_mhz <= 0.0 || cfg.band.bandwidth_mhz > 2000.0)
        bad("band.bandwidth_mhz: must be in (0, 2000]");
    {
        Band b{cfg.band.name, cfg.f_c_hz(), cfg.bandwidth_hz(),
               band_default_numerology(cfg.band.name)};
        if (cfg.band.bandwidth_mhz > 0.0 && !band_valid(b))
            bad("band.f_c_ghz: carrier outside the " + to_string(cfg.band.name) + " band range");
    }

    if (cfg.phy.numerology < -1 || cfg.phy.numerology > 4)
        bad("phy.numerology: must be in [0, 4] or auto");

    if (cfg.duplex.m_dl < 1 || cfg.duplex.m_dl > 100000) bad("duplex.m_dl: must be in [1, 100000]");
    if (cfg.duplex.n_gp < 0 || cfg.duplex.n_gp > 100000)
        bad("duplex.n_gp: must be in [0, 100000]");

    if (cfg.ta.tolerance_slots <= 0.0) bad("ta.tolerance_slots: must be > 0");

    if (cfg.harq.n < 1 || cfg.harq.n > 100000) bad("harq.n: must be in [1, 100000]");
    if (cfg.harq.max_retx < 0) bad("harq.max_retx: must be >= 0");
    if (cfg.harq.processing_slots < 0) bad("harq.processing_slots: must be >= 0");

    if (cfg.channel.bler < 0.0 || cfg.channel.bler >= 1.0) bad("channel.bler: must be in [0, 1)");
    if (cfg.channel.margin_db < 0.0) bad("channel.margin_db: must be >= 0");
    if (cfg.channel.temperature_k <= 0.0) bad("channel.temperature_k: must be > 0");

    if (cfg.transport.rate_mbps <= 0.0) bad("transport.rate_mbps: must be > 0");
    if (cfg.transport.packet_bytes < 16 || cfg.transport.packet_bytes > 65535)
        bad("transport.packet_bytes: must be in [16, 65535]");
    if (cfg.transport.feedback_kbps < 0.0) bad("transport.feedback_kbps: must be >= 0");
    if (cfg.transport.feedback_packet_bytes < 16 || cfg.transport.feedback_packet_bytes > 65535)
        bad("transport.feedback_packet_bytes: must be in [16, 65535]");
    if (cfg.transport.start_s < 0.0) bad("transport.start_s: must be >= 0");

    if (cfg.tcp.rto_ms <= 0.0) bad("tcp.rto_ms: must be > 0");
    if (cfg.tcp.cubic_c <= 0.0) bad("tcp.cubic_c: must be > 0");
    if (cfg.tcp.cubic_beta <= 0.0 || cfg.tcp.cubic_beta >= 1.0)
        bad("tcp.cubic_beta: must be in (0, 1)");

    if (cfg.ues.count < 1 || cfg.ues.count > 10000) bad("ues.count: must be in [1, 10000]");
    if (cfg.ues.half_beamwidth_deg < 0.0) bad("ues.half_beamwidth_deg: must be > 0 or auto");
    if (cfg.ues.half_beamwidth_deg > 0.0 && cfg.satellite.altitude_km > 0.0 &&
        cfg.ues.half_beamwidth_deg > earth_limb_angle_deg(cfg.satellite.altitude_km))
        bad("ues.half_beamwidth_deg: beam overshoots the Earth limb at this altitude");

    if (cfg.sim.duration_s <= 0.0 || cfg.sim.duration_s > 86400.0)
        bad("sim.duration_s: must be in (0, 86400]");

    for (std::size_t i = 1; i < cfg.rate_table.size(); ++i) {
        if (cfg.rate_table[i].first <= cfg.rate_table[i - 1].first ||
            cfg.rate_table[i].second < cfg.rate_table[i - 1].second) {
            bad("rate_table: SNR thresholds must be strictly increasing and efficiencies "
                "non-decreasing");
            break;
        }
    }
    return issues;
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::vector<ConfigIssue> issues;
    std::map<std::string, int> key_lines;

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back({line_no, "expected 'section.key = value', got '" + line + "'"});
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            issues.push_back({line_no, "expected 'section.key = value', got '" + line + "'"});
            continue;
        }

        const std::string err = config_set_key(cfg, key, value);
        if (!err.empty()) {
            issues.push_back({line_no, err});
            continue;
        }
        key_lines[key] = line_no;
    }

    if (!key_lines.count("satellite.altitude_km"))
        issues.push_back({0, "missing required key satellite.altitude_km (section satellite)"});
    if (!key_lines.count("sim.duration_s"))
        issues.push_back({0, "missing required key sim.duration_s (section sim)"});

    if (issues.empty()) {
        for (auto& issue : validate_config(cfg)) {
            // Range messages start with the offending key; attach the line
            // the key came from when it appeared in the text.
            const auto colon = issue.message.find(':');
            if (colon != std::string::npos) {
                const auto it = key_lines.find(issue.message.substr(0, colon));
                if (it != key_lines.end()) issue.line = it->second;
            }
            issues.push_back(std::move(issue));
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

namespace {
// Shortest representation that parses back to the same double.
std::string fmt(double v) {
    char buf[64];
    for (int precision = 9; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::stod(buf) == v) break;
    }
    return buf;
}
}  // namespace

std::string serialize_config(const ScenarioConfig& cfg) {
    std::string out;
    auto kv = [&out](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    kv("satellite.altitude_km", fmt(cfg.satellite.altitude_km));
    kv("satellite.payload", to_string(cfg.satellite.payload));
    kv("satellite.gateway_elevation_deg", fmt(cfg.satellite.gateway_elevation_deg));
    kv("band.name", to_string(cfg.band.name));
    kv("band.f_c_ghz", cfg.band.f_c_ghz > 0.0 ? fmt(cfg.band.f_c_ghz) : "auto");
    kv("band.bandwidth_mhz", fmt(cfg.band.bandwidth_mhz));
    kv("phy.numerology",
       cfg.phy.numerology >= 0 ? std::to_string(cfg.phy.numerology) : "auto");
    kv("duplex.mode", to_string(cfg.duplex.mode));
    kv("duplex.m_dl", std::to_string(cfg.duplex.m_dl));
    kv("duplex.n_gp", std::to_string(cfg.duplex.n_gp));
    kv("ta.gnss", cfg.ta.gnss ? "on" : "off");
    kv("ta.tolerance_slots", fmt(cfg.ta.tolerance_slots));
    kv("harq.enabled", cfg.harq.enabled ? "on" : "off");
    kv("harq.n", std::to_string(cfg.harq.n));
    kv("harq.max_retx", std::to_string(cfg.harq.max_retx));
    kv("harq.processing_slots", std::to_string(cfg.harq.processing_slots));
    kv("channel.bler", fmt(cfg.channel.bler));
    kv("channel.margin_db", fmt(cfg.channel.margin_db));
    kv("channel.tx_power_dbm", fmt(cfg.channel.tx_power_dbm));
    kv("channel.tx_gain_dbi", fmt(cfg.channel.tx_gain_dbi));
    kv("channel.rx_gain_dbi", fmt(cfg.channel.rx_gain_dbi));
    kv("channel.noise_figure_db", fmt(cfg.channel.noise_figure_db));
    kv("channel.temperature_k", fmt(cfg.channel.temperature_k));
    kv("transport.kind", to_string(cfg.transport.kind));
    kv("transport.rate_mbps", fmt(cfg.transport.rate_mbps));
    kv("transport.packet_bytes", std::to_string(cfg.transport.packet_bytes));
    kv("transport.direction", to_string(cfg.transport.direction));
    kv("transport.feedback_kbps", fmt(cfg.transport.feedback_kbps));
    kv("transport.feedback_packet_bytes", std::to_string(cfg.transport.feedback_packet_bytes));
    kv("transport.start_s", fmt(cfg.transport.start_s));
    kv("tcp.rto_ms", fmt(cfg.tcp.rto_ms));
    kv("tcp.rto_adaptive", cfg.tcp.rto_adaptive ? "on" : "off");
    kv("tcp.cubic_c", fmt(cfg.tcp.cubic_c));
    kv("tcp.cubic_beta", fmt(cfg.tcp.cubic_beta));
    kv("ues.count", std::to_string(cfg.ues.count));
    kv("ues.placement", to_string(cfg.ues.placement));
    kv("ues.half_beamwidth_deg",
       cfg.ues.half_beamwidth_deg > 0.0 ? fmt(cfg.ues.half_beamwidth_deg) : "auto");
    kv("sim.duration_s", fmt(cfg.sim.duration_s));
    kv("sim.seed", std::to_string(cfg.sim.seed));
    for (const auto& [snr, eff] : cfg.rate_table) kv("rate_table." + fmt(snr), fmt(eff));
    return out;
}

}  // namespace ntnsim
