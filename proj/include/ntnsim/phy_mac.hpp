#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace ntnsim {

using TimeNs = std::int64_t;

/// NR subcarrier-spacing index; slot duration 1/2^mu ms, 14 OFDM symbols
/// per slot. mu in [0, 4] keeps slot durations an exact integer count of
/// nanoseconds.
struct Numerology {
    int mu = 0;

    explicit Numerology(int mu_in);
    Numerology() = default;

    TimeNs slot_ns() const { return 1'000'000 >> mu; }
    double slot_s() const { return static_cast<double>(slot_ns()) * 1e-9; }
    static constexpr int symbols_per_slot = 14;
};

enum class SlotType { Downlink, Guard, Uplink };

/// Repeating layout [DL x M][GP x N][UL x 1]. Slot types are queryable by
/// absolute slot index.
struct TddPattern {
    int m_dl_slots = 1;
    int n_gp_slots = 0;
    static constexpr int ul_slots = 1;

    int cycle_slots() const { return m_dl_slots + n_gp_slots + ul_slots; }
    SlotType slot_type(std::int64_t slot_index) const;
};

/// Validates M >= 1, N >= 0.
TddPattern build_tdd_pattern(int m_dl, int n_gp);

/// ceil(rtt_max / slot_duration): guard slots needed to absorb the worst
/// round trip at the DL->UL switch.
int gp_slots_required(double rtt_max_s, const Numerology& numerology);

struct TimingAdvance {
    double common_ta_s = 0.0;
    double ue_specific_ta_s = 0.0;
    bool gnss_available = true;
};

/// common + ue_specific when GNSS is available, common alone otherwise.
double compute_applied_ta_s(const TimingAdvance& ta);

struct AlignmentTolerance {
    double window_s;
};

struct AlignmentResult {
    bool aligned;
    double offset_s;  // |true_delay - applied_ta|, also set when aligned
};

/// Aligned iff the uplink arrival offset at the gNB fits the tolerance
/// window. Misaligned transmissions are dropped at the gNB (slot wasted).
AlignmentResult ul_alignment_check(double true_delay_s, double applied_ta_s,
                                   const AlignmentTolerance& tol);

/// First-packet uplink access delay: scheduling request plus grant, two
/// round trips, paid once per flow activation.
double ul_grant_delay_s(double rtt_s);

/// Round-robin pick over an eligibility mask, one grant per call. The
/// cursor persists so consecutive calls cycle fairly through the flows.
class RoundRobinPicker {
  public:
    /// Index of the first eligible flow at or after the cursor, advancing
    /// the cursor past it; empty when no flow is eligible.
    std::optional<std::size_t> pick(const std::vector<bool>& eligible);

  private:
    std::size_t cursor_ = 0;
};

}  // namespace ntnsim
