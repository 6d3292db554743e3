#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace ntnsim {

struct TcpConfig {
    double rto_s = 0.2;          // retransmission timeout base
    bool rto_adaptive = false;   // off: fixed base; on: SRTT/RTTVAR estimator
    double cubic_c = 0.4;
    double cubic_beta = 0.3;
    double rto_min_s = 0.01;     // floor in adaptive mode
    double rto_cap_s = 60.0;
};

enum class TcpPhase { Closed, Handshake, SlowStart, CongAvoid, Recovery };

/// Sender half of a stop-and-go TCP model: three-way handshake, slow
/// start, cubic congestion avoidance, RTO with exponential backoff, fast
/// retransmit on three duplicate ACKs. Segments are counted in packets.
///
/// The connection is wired to its environment through callbacks: the
/// simulation (or a test harness) supplies transmission and timer
/// scheduling. Timers are generation tagged because scheduled events
/// cannot be revoked; stale fires must be passed back to on_timer anyway
/// and are ignored.
class TcpSender {
  public:
    struct Hooks {
        std::function<void()> send_syn;
        // retransmit=true when the segment should jump the transmit queue
        std::function<void(std::int64_t seq, bool retransmit)> send_segment;
        std::function<void(double t_abs, std::uint64_t generation)> set_timer;
        std::function<void(double t_established)> on_established;
    };

    TcpSender(TcpConfig cfg, Hooks hooks);

    /// Opens the connection: emits the first SYN and arms the handshake
    /// timer.
    void start(double t_now);

    /// The application appended data; total_segments is cumulative.
    void on_app_data(double t_now, std::int64_t total_segments);

    void on_syn_ack(double t_now);

    /// Cumulative ACK carrying the receiver's next expected sequence.
    void on_ack(double t_now, std::int64_t ack_seq);

    void on_timer(double t_now, std::uint64_t generation);

    TcpPhase phase() const { return phase_; }
    double cwnd_pkts() const { return cwnd_; }
    double ssthresh_pkts() const { return ssthresh_; }
    double rto_s() const { return rto_; }
    double srtt_s() const { return srtt_; }
    double w_max_pkts() const { return w_max_; }
    std::int64_t snd_una() const { return snd_una_; }
    std::int64_t snd_nxt() const { return snd_nxt_; }
    std::int64_t outstanding() const { return snd_nxt_ - snd_una_; }
    int dupack_count() const { return dupack_count_; }

    /// Number of invariant violations observed (cwnd >= 1 and
    /// rto in [rto_min, rto_cap] are checked after every update).
    int invariant_violations() const { return invariant_violations_; }

  private:
    void enter_cong_avoid(double t_now);
    double cubic_window(double t_now) const;
    void try_send(double t_now);
    void arm_timer(double t_now);
    void stop_timer();
    void apply_backoff();
    void reset_rto_base();
    void take_rtt_sample(double sample_s);
    void check_invariants();

    TcpConfig cfg_;
    Hooks hooks_;

    TcpPhase phase_ = TcpPhase::Closed;
    double cwnd_ = 1.0;
    double ssthresh_ = 1e18;
    double rto_;
    double srtt_ = 0.0;
    double rttvar_ = 0.0;
    bool have_rtt_sample_ = false;
    double w_max_ = 0.0;
    double epoch_start_ = 0.0;
    int dupack_count_ = 0;
    std::int64_t recover_ = 0;

    std::int64_t snd_una_ = 0;
    std::int64_t snd_nxt_ = 0;
    std::int64_t app_total_segments_ = 0;

    std::map<std::int64_t, double> send_time_;  // un-retransmitted segments only
    std::uint64_t timer_generation_ = 0;
    bool timer_armed_ = false;
    int invariant_violations_ = 0;
};

/// Receiver half: in-order reassembly and one cumulative ACK per arriving
/// segment (no delayed ACKs).
class TcpReceiver {
  public:
    struct Hooks {
        std::function<void(std::int64_t ack_seq)> send_ack;
        std::function<void()> send_syn_ack;
        // segments handed to the application, in order
        std::function<void(std::int64_t seq)> deliver;
    };

    explicit TcpReceiver(Hooks hooks);

    void on_syn();
    void on_segment(std::int64_t seq);

    std::int64_t rcv_next() const { return rcv_next_; }

  private:
    Hooks hooks_;
    std::int64_t rcv_next_ = 0;
    std::set<std::int64_t> out_of_order_;
};

}  // namespace ntnsim
