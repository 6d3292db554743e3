#include "ntnsim/tcp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ntnsim {

TcpSender::TcpSender(TcpConfig cfg, Hooks hooks) : cfg_(cfg), hooks_(std::move(hooks)) {
    if (cfg_.rto_s <= 0.0) throw std::invalid_argument("tcp: rto must be > 0");
    if (cfg_.cubic_beta <= 0.0 || cfg_.cubic_beta >= 1.0)
        throw std::invalid_argument("tcp: beta must be in (0, 1)");
    if (cfg_.cubic_c <= 0.0) throw std::invalid_argument("tcp: cubic C must be > 0");
    rto_ = cfg_.rto_s;
}

void TcpSender::start(double t_now) {
    if (phase_ != TcpPhase::Closed) throw std::logic_error("tcp: start on an open connection");
    phase_ = TcpPhase::Handshake;
    hooks_.send_syn();
    arm_timer(t_now);
}

void TcpSender::on_app_data(double t_now, std::int64_t total_segments) {
    app_total_segments_ = std::max(app_total_segments_, total_segments);
    if (phase_ != TcpPhase::Closed && phase_ != TcpPhase::Handshake) try_send(t_now);
}

void TcpSender::on_syn_ack(double t_now) {
    if (phase_ != TcpPhase::Handshake) return;  // duplicate SYN-ACK
    phase_ = TcpPhase::SlowStart;
    cwnd_ = 1.0;
    reset_rto_base();
    stop_timer();
    if (hooks_.on_established) hooks_.on_established(t_now);
    try_send(t_now);
    check_invariants();
}

double TcpSender::cubic_window(double t_now) const {
    const double k = std::cbrt(w_max_ * cfg_.cubic_beta / cfg_.cubic_c);
    const double t = t_now - epoch_start_;
    const double dt = t - k;
    return cfg_.cubic_c * dt * dt * dt + w_max_;
}

void TcpSender::enter_cong_avoid(double t_now) {
    phase_ = TcpPhase::CongAvoid;
    epoch_start_ = t_now;
    w_max_ = std::max(w_max_, cwnd_);
}

void TcpSender::on_ack(double t_now, std::int64_t ack_seq) {
    if (phase_ == TcpPhase::Closed || phase_ == TcpPhase::Handshake) return;

    if (ack_seq > snd_una_) {
        const auto it = send_time_.find(ack_seq - 1);
        if (it != send_time_.end()) take_rtt_sample(t_now - it->second);
        send_time_.erase(send_time_.begin(), send_time_.upper_bound(ack_seq - 1));

        const double newly = static_cast<double>(ack_seq - snd_una_);
        snd_una_ = ack_seq;
        dupack_count_ = 0;

        if (phase_ == TcpPhase::Recovery) {
            if (ack_seq >= recover_) {
                enter_cong_avoid(t_now);  // full ACK ends the loss episode
            } else {
                hooks_.send_segment(snd_una_, true);  // partial ACK: next hole
                send_time_.erase(snd_una_);
            }
        } else if (phase_ == TcpPhase::SlowStart) {
            cwnd_ += newly;
            if (cwnd_ >= ssthresh_) enter_cong_avoid(t_now);
        } else {
            cwnd_ = std::max(cwnd_, cubic_window(t_now));
        }

        reset_rto_base();
        if (outstanding() > 0) arm_timer(t_now);
        else stop_timer();
        try_send(t_now);
    } else if (ack_seq == snd_una_ && outstanding() > 0) {
        ++dupack_count_;
        if (dupack_count_ == 3 && phase_ != TcpPhase::Recovery) {
            w_max_ = cwnd_;
            cwnd_ = std::max(1.0, cwnd_ * (1.0 - cfg_.cubic_beta));
            ssthresh_ = cwnd_;
            phase_ = TcpPhase::Recovery;
            recover_ = snd_nxt_;
            hooks_.send_segment(snd_una_, true);  // fast retransmit
            send_time_.erase(snd_una_);
        }
        try_send(t_now);
    }
    check_invariants();
}

void TcpSender::on_timer(double t_now, std::uint64_t generation) {
    if (!timer_armed_ || generation != timer_generation_) return;  // stale timer
    timer_armed_ = false;

    if (phase_ == TcpPhase::Handshake) {
        hooks_.send_syn();
        apply_backoff();
        arm_timer(t_now);
        return;
    }
    if (outstanding() <= 0) return;

    // Timeout always collapses the window; no spurious-timeout detection.
    ssthresh_ = std::max(1.0, cwnd_ / 2.0);
    cwnd_ = 1.0;
    phase_ = TcpPhase::SlowStart;
    dupack_count_ = 0;
    apply_backoff();
    hooks_.send_segment(snd_una_, true);
    send_time_.erase(snd_una_);
    arm_timer(t_now);
    check_invariants();
}

void TcpSender::try_send(double t_now) {
    while (snd_nxt_ < app_total_segments_ &&
           static_cast<double>(outstanding()) < cwnd_) {
        hooks_.send_segment(snd_nxt_, false);
        send_time_.emplace(snd_nxt_, t_now);
        ++snd_nxt_;
        if (!timer_armed_) arm_timer(t_now);
    }
}

void TcpSender::arm_timer(double t_now) {
    ++timer_generation_;
    timer_armed_ = true;
    hooks_.set_timer(t_now + rto_, timer_generation_);
}

void TcpSender::stop_timer() {
    ++timer_generation_;
    timer_armed_ = false;
}

void TcpSender::apply_backoff() { rto_ = std::min(rto_ * 2.0, cfg_.rto_cap_s); }

void TcpSender::reset_rto_base() {
    if (!cfg_.rto_adaptive) {
        rto_ = cfg_.rto_s;
        return;
    }
    if (!have_rtt_sample_) return;  // keep the configured base until a sample exists
    rto_ = std::clamp(srtt_ + 4.0 * rttvar_, cfg_.rto_min_s, cfg_.rto_cap_s);
}

void TcpSender::take_rtt_sample(double sample_s) {
    if (sample_s < 0.0) return;
    if (!have_rtt_sample_) {
        srtt_ = sample_s;
        rttvar_ = sample_s / 2.0;
        have_rtt_sample_ = true;
    } else {
        constexpr double alpha = 1.0 / 8.0;
        constexpr double beta = 1.0 / 4.0;
        rttvar_ = (1.0 - beta) * rttvar_ + beta * std::abs(srtt_ - sample_s);
        srtt_ = (1.0 - alpha) * srtt_ + alpha * sample_s;
    }
}

void TcpSender::check_invariants() {
    if (cwnd_ < 1.0) ++invariant_violations_;
    const double floor = cfg_.rto_adaptive ? cfg_.rto_min_s : cfg_.rto_s;
    if (rto_ < floor - 1e-12 || rto_ > cfg_.rto_cap_s + 1e-12) ++invariant_violations_;
}

TcpReceiver::TcpReceiver(Hooks hooks) : hooks_(std::move(hooks)) {}

void TcpReceiver::on_syn() { hooks_.send_syn_ack(); }

void TcpReceiver::on_segment(std::int64_t seq) {
    if (seq == rcv_next_) {
        ++rcv_next_;
        hooks_.deliver(seq);
        while (!out_of_order_.empty() && *out_of_order_.begin() == rcv_next_) {
            hooks_.deliver(rcv_next_);
            out_of_order_.erase(out_of_order_.begin());
            ++rcv_next_;
        }
    } else if (seq > rcv_next_) {
        out_of_order_.insert(seq);
    }
    hooks_.send_ack(rcv_next_);  // one cumulative ACK per arriving segment
}

}  // namespace ntnsim
