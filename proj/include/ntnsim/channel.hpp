#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ntnsim {

enum class BandName { L, S, Ku, Ka };

std::string to_string(BandName band);

/// Carrier band. f_c must fall inside the named range
/// (L: 1-2 GHz, S: 2-4 GHz, Ku: 12-14 GHz, Ka: 20-30 GHz).
struct Band {
    BandName name = BandName::S;
    double f_c_hz = 2.0e9;
    double bandwidth_hz = 25.0e6;
    int numerology_default = 0;
};

/// Checks f_c against the named band range and bandwidth > 0.
bool band_valid(const Band& band);

/// Default carrier and numerology per band when the scenario does not pin
/// them explicitly.
double band_default_f_c_hz(BandName band);
int band_default_numerology(BandName band);

struct LinkBudgetConfig {
    double tx_power_dbm = 33.0;
    double tx_gain_dbi = 43.2;
    double rx_gain_dbi = 39.7;
    double atmospheric_margin_db = 0.0;
    double noise_figure_db = 7.0;
    double temperature_k = 290.0;
};

/// Free-space path loss, 92.45 + 20 log10(d_km) + 20 log10(f_GHz).
double fspl_db(double distance_km, double f_c_hz);

/// Thermal noise power k*T*B in dBm plus the receiver noise figure.
double noise_power_dbm(double bandwidth_hz, double temperature_k, double noise_figure_db);

/// tx_power + gains - fspl - margin - noise_power.
double snr_db(const LinkBudgetConfig& cfg, double distance_km, double f_c_hz,
              double bandwidth_hz);

/// Monotone step table of (snr_db threshold, spectral efficiency b/s/Hz).
/// Rates are always gated under Shannon capacity.
class RateTable {
  public:
    RateTable();  // loads the default 15-step table
    explicit RateTable(std::vector<std::pair<double, double>> steps);

    /// min(B*log2(1+snr), table efficiency * B); zero below the lowest step.
    double rate_bps(double snr_db, double bandwidth_hz) const;

    const std::vector<std::pair<double, double>>& steps() const { return steps_; }
    bool operator==(const RateTable&) const = default;

  private:
    std::vector<std::pair<double, double>> steps_;
};

/// 15-step table from 0.1523 to 7.4063 b/s/Hz, CQI-style thresholds.
RateTable default_rate_table();

}  // namespace ntnsim
