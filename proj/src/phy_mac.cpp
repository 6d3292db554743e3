#include "ntnsim/phy_mac.hpp"

#include <cmath>
#include <stdexcept>

namespace ntnsim {

Numerology::Numerology(int mu_in) : mu(mu_in) {
    if (mu < 0 || mu > 4) throw std::invalid_argument("numerology: mu must be in [0, 4]");
}

SlotType TddPattern::slot_type(std::int64_t slot_index) const {
    const int pos = static_cast<int>(slot_index % cycle_slots());
    if (pos < m_dl_slots) return SlotType::Downlink;
    if (pos < m_dl_slots + n_gp_slots) return SlotType::Guard;
    return SlotType::Uplink;
}

TddPattern build_tdd_pattern(int m_dl, int n_gp) {
    if (m_dl < 1) throw std::invalid_argument("tdd pattern: M must be >= 1");
    if (n_gp < 0) throw std::invalid_argument("tdd pattern: N must be >= 0");
    return TddPattern{m_dl, n_gp};
}

int gp_slots_required(double rtt_max_s, const Numerology& numerology) {
    if (rtt_max_s < 0.0) throw std::invalid_argument("gp_slots_required: rtt must be >= 0");
    return static_cast<int>(std::ceil(rtt_max_s / numerology.slot_s() - 1e-12));
}

double compute_applied_ta_s(const TimingAdvance& ta) {
    return ta.common_ta_s + (ta.gnss_available ? ta.ue_specific_ta_s : 0.0);
}

AlignmentResult ul_alignment_check(double true_delay_s, double applied_ta_s,
                                   const AlignmentTolerance& tol) {
    if (tol.window_s <= 0.0) throw std::invalid_argument("alignment: window must be > 0");
    const double offset = std::abs(true_delay_s - applied_ta_s);
    return {offset <= tol.window_s, offset};
}

double ul_grant_delay_s(double rtt_s) {
    if (rtt_s < 0.0) throw std::invalid_argument("ul_grant_delay: rtt must be >= 0");
    return 2.0 * rtt_s;
}

std::optional<std::size_t> RoundRobinPicker::pick(const std::vector<bool>& eligible) {
    const std::size_t n = eligible.size();
    if (n == 0) return std::nullopt;
    if (cursor_ >= n) cursor_ = 0;
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t i = (cursor_ + step) % n;
        if (eligible[i]) {
            cursor_ = (i + 1) % n;
            return i;
        }
    }
    return std::nullopt;
}

}  // namespace ntnsim
