#include "ntnsim/harq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ntnsim {

HarqEntity::HarqEntity(int n_processes, bool feedback_enabled, int max_retx,
                       double processing_delay_s)
    : feedback_enabled_(feedback_enabled),
      max_retx_(max_retx),
      processing_delay_s_(processing_delay_s) {
    if (n_processes < 1) throw std::invalid_argument("harq: n must be >= 1");
    if (max_retx < 0) throw std::invalid_argument("harq: max_retx must be >= 0");
    if (processing_delay_s < 0.0) throw std::invalid_argument("harq: processing must be >= 0");
    processes_.resize(static_cast<std::size_t>(n_processes));
    for (int i = 0; i < n_processes; ++i) processes_[static_cast<std::size_t>(i)].id = i;
}

int HarqEntity::in_flight() const {
    return static_cast<int>(
        std::count_if(processes_.begin(), processes_.end(), [](const HarqProcess& p) {
            return p.state != HarqProcessState::Idle;
        }));
}

void HarqEntity::check_invariant() {
    if (in_flight() > n_processes()) ++violations_;
}

std::optional<int> HarqEntity::try_acquire() {
    for (auto& p : processes_) {
        if (p.state == HarqProcessState::Idle) {
            p.state = HarqProcessState::WaitingFeedback;
            p.retx_count = 0;
            check_invariant();
            return p.id;
        }
    }
    return std::nullopt;  // all n waiting: HARQ stall
}

std::optional<double> HarqEntity::on_transmit(int process_id, double t_now_s, double rtt_s,
                                              std::int64_t tb_bits, std::uint64_t tb_tag) {
    auto& p = processes_.at(static_cast<std::size_t>(process_id));
    if (p.state != HarqProcessState::WaitingFeedback)
        throw std::logic_error("harq: transmit on a process that is not in flight");
    p.tb_bits = tb_bits;
    p.tb_tag = tb_tag;
    if (!feedback_enabled_) {
        p.state = HarqProcessState::Idle;
        return std::nullopt;
    }
    return t_now_s + rtt_s + processing_delay_s_;
}

std::optional<double> HarqEntity::on_retransmit(int process_id, double t_now_s, double rtt_s) {
    auto& p = processes_.at(static_cast<std::size_t>(process_id));
    if (p.state != HarqProcessState::PendingRetx)
        throw std::logic_error("harq: retransmit on a process without a pending block");
    p.state = HarqProcessState::WaitingFeedback;
    p.retx_count += 1;
    check_invariant();
    return t_now_s + rtt_s + processing_delay_s_;
}

HarqFeedbackOutcome HarqEntity::on_feedback(int process_id, bool ack) {
    auto& p = processes_.at(static_cast<std::size_t>(process_id));
    if (p.state != HarqProcessState::WaitingFeedback)
        throw std::logic_error("harq: feedback for a process that is not waiting");
    if (ack) {
        p.state = HarqProcessState::Idle;
        return HarqFeedbackOutcome::Released;
    }
    if (p.retx_count >= max_retx_) {
        p.state = HarqProcessState::Idle;
        return HarqFeedbackOutcome::Dropped;  // retry exhaustion, loss surfaces upward
    }
    p.state = HarqProcessState::PendingRetx;
    return HarqFeedbackOutcome::Retransmit;
}

const HarqProcess& HarqEntity::process(int process_id) const {
    return processes_.at(static_cast<std::size_t>(process_id));
}

std::optional<int> HarqEntity::next_pending_retx() const {
    for (const auto& p : processes_) {
        if (p.state == HarqProcessState::PendingRetx) return p.id;
    }
    return std::nullopt;
}

double SaturationPrediction::duty(int n) const {
    if (turnaround_s <= 0.0) return 1.0;
    return std::min(1.0, static_cast<double>(n) * slot_s / turnaround_s);
}

SaturationPrediction predict_saturation(double rtt_s, double processing_s,
                                        const Numerology& numerology) {
    if (rtt_s < 0.0) throw std::invalid_argument("predict_saturation: rtt must be >= 0");
    if (processing_s < 0.0) throw std::invalid_argument("predict_saturation: processing must be >= 0");
    const double slot = numerology.slot_s();
    const double turnaround = rtt_s + processing_s;
    const int n_star = std::max(1, static_cast<int>(std::ceil(turnaround / slot - 1e-12)));
    return {n_star, slot, turnaround};
}

}  // namespace ntnsim
