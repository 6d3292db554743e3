#include "ntnsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ntnsim/constants.hpp"

namespace ntnsim {

std::string to_string(BandName band) {
    switch (band) {
        case BandName::L: return "L";
        case BandName::S: return "S";
        case BandName::Ku: return "Ku";
        case BandName::Ka: return "Ka";
    }
    return "?";
}

namespace {
struct BandRange {
    double lo_hz, hi_hz;
};
BandRange band_range(BandName band) {
    switch (band) {
        case BandName::L: return {1.0e9, 2.0e9};
        case BandName::S: return {2.0e9, 4.0e9};
        case BandName::Ku: return {12.0e9, 14.0e9};
        case BandName::Ka: return {20.0e9, 30.0e9};
    }
    return {0.0, 0.0};
}
}  // namespace

bool band_valid(const Band& band) {
    const auto range = band_range(band.name);
    return band.f_c_hz >= range.lo_hz && band.f_c_hz <= range.hi_hz && band.bandwidth_hz > 0.0;
}

double band_default_f_c_hz(BandName band) {
    switch (band) {
        case BandName::L: return 1.5e9;
        case BandName::S: return 2.0e9;
        case BandName::Ku: return 12.0e9;
        case BandName::Ka: return 20.0e9;
    }
    return 2.0e9;
}

int band_default_numerology(BandName band) {
    switch (band) {
        case BandName::L: return 0;
        case BandName::S: return 0;
        case BandName::Ku: return 2;
        case BandName::Ka: return 3;
    }
    return 0;
}

double fspl_db(double distance_km, double f_c_hz) {
    if (distance_km <= 0.0) throw std::invalid_argument("fspl: distance must be > 0");
    if (f_c_hz <= 0.0) throw std::invalid_argument("fspl: carrier must be > 0");
    return 92.45 + 20.0 * std::log10(distance_km) + 20.0 * std::log10(f_c_hz / 1e9);
}

double noise_power_dbm(double bandwidth_hz, double temperature_k, double noise_figure_db) {
    if (bandwidth_hz <= 0.0) throw std::invalid_argument("noise_power: bandwidth must be > 0");
    if (temperature_k <= 0.0) throw std::invalid_argument("noise_power: temperature must be > 0");
    const double noise_w = constants::boltzmann_j_k * temperature_k * bandwidth_hz;
    return 10.0 * std::log10(noise_w * 1000.0) + noise_figure_db;
}

double snr_db(const LinkBudgetConfig& cfg, double distance_km, double f_c_hz,
              double bandwidth_hz) {
    return cfg.tx_power_dbm + cfg.tx_gain_dbi + cfg.rx_gain_dbi - fspl_db(distance_km, f_c_hz) -
           cfg.atmospheric_margin_db -
           noise_power_dbm(bandwidth_hz, cfg.temperature_k, cfg.noise_figure_db);
}

namespace {
std::vector<std::pair<double, double>> default_rate_steps();
}  // namespace

RateTable::RateTable() : steps_(default_rate_steps()) {}

RateTable::RateTable(std::vector<std::pair<double, double>> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw std::invalid_argument("rate table: at least one step required");
    for (size_t i = 1; i < steps_.size(); ++i) {
        if (steps_[i].first <= steps_[i - 1].first || steps_[i].second < steps_[i - 1].second)
            throw std::invalid_argument("rate table: steps must be strictly increasing");
    }
}

double RateTable::rate_bps(double snr_db, double bandwidth_hz) const {
    if (bandwidth_hz <= 0.0) throw std::invalid_argument("rate: bandwidth must be > 0");
    double efficiency = 0.0;
    for (const auto& [threshold, se] : steps_) {
        if (snr_db >= threshold) efficiency = se;
        else break;
    }
    if (efficiency == 0.0) return 0.0;
    const double snr_linear = std::pow(10.0, snr_db / 10.0);
    const double shannon = bandwidth_hz * std::log2(1.0 + snr_linear);
    return std::min(shannon, efficiency * bandwidth_hz);
}

namespace {
std::vector<std::pair<double, double>> default_rate_steps() {
    // CQI-style thresholds; efficiencies span 0.1523 to 7.4063 b/s/Hz.
    return {
        {-6.7, 0.1523},
        {-4.7, 0.3770},
        {-2.3, 0.8770},
        {0.2, 1.4766},
        {2.4, 1.9141},
        {4.3, 2.4063},
        {5.9, 2.7305},
        {8.1, 3.3223},
        {10.3, 3.9023},
        {11.7, 4.5234},
        {14.1, 5.1152},
        {16.3, 5.5547},
        {18.7, 6.2266},
        {21.0, 6.9141},
        {22.7, 7.4063},
    };
}
}  // namespace

RateTable default_rate_table() { return RateTable{default_rate_steps()}; }

}  // namespace ntnsim
