#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ntnsim/phy_mac.hpp"

namespace ntnsim {

enum class HarqProcessState { Idle, WaitingFeedback, PendingRetx };

struct HarqProcess {
    int id = 0;
    HarqProcessState state = HarqProcessState::Idle;
    std::int64_t tb_bits = 0;
    int retx_count = 0;
    std::uint64_t tb_tag = 0;  // opaque handle for the caller's TB record
};

enum class HarqFeedbackOutcome { Released, Retransmit, Dropped };

/// Per-UE set of n stop-and-wait processes. A process is acquired at grant
/// time, carries one transport block, and is blocked until its feedback
/// returns (rtt + processing later). With feedback disabled a process is
/// released at transmit and reliability is delegated upward.
class HarqEntity {
  public:
    HarqEntity(int n_processes, bool feedback_enabled, int max_retx, double processing_delay_s);

    /// Free process id, marked in flight, or empty when all n are waiting
    /// (the stall condition). Always granted when feedback is disabled.
    std::optional<int> try_acquire();

    /// Records the transmission and returns the absolute feedback time
    /// t_now + rtt + processing. Must follow try_acquire on an in-flight
    /// process. With feedback disabled the process is released immediately
    /// and no feedback time is returned.
    std::optional<double> on_transmit(int process_id, double t_now_s, double rtt_s,
                                      std::int64_t tb_bits, std::uint64_t tb_tag);

    /// Retransmission of a NACKed block; same contract as on_transmit but
    /// keeps the stored TB.
    std::optional<double> on_retransmit(int process_id, double t_now_s, double rtt_s);

    /// ACK releases the process; NACK marks it pending retransmission until
    /// retx_count reaches max_retx, after which the block is dropped and the
    /// loss surfaces to the layer above.
    HarqFeedbackOutcome on_feedback(int process_id, bool ack);

    const HarqProcess& process(int process_id) const;
    int n_processes() const { return static_cast<int>(processes_.size()); }
    bool feedback_enabled() const { return feedback_enabled_; }
    double processing_delay_s() const { return processing_delay_s_; }
    int in_flight() const;

    /// First process pending retransmission, if any; retransmissions take
    /// scheduling priority over new data.
    std::optional<int> next_pending_retx() const;

    /// In-flight count never observed above n. The check runs on every
    /// mutation; violations() stays zero in a correct run.
    int violations() const { return violations_; }

  private:
    void check_invariant();

    std::vector<HarqProcess> processes_;
    bool feedback_enabled_;
    int max_retx_;
    double processing_delay_s_;
    int violations_ = 0;
};

struct SaturationPrediction {
    int n_star;  // smallest process count that keeps the link busy
    double slot_s;
    double turnaround_s;  // rtt + processing

    /// Fraction of time the link can be kept busy with n processes:
    /// min(1, n * slot / (rtt + processing)).
    double duty(int n) const;
};

/// Analytic duty-cycle predictor used to validate the simulated HARQ
/// throughput: n_star = ceil((rtt + processing) / slot).
SaturationPrediction predict_saturation(double rtt_s, double processing_s,
                                        const Numerology& numerology);

}  // namespace ntnsim
