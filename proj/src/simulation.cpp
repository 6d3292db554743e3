#include "ntnsim/simulation.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <stdexcept>

#include "ntnsim/constants.hpp"
#include "ntnsim/event_queue.hpp"
#include "ntnsim/harq.hpp"
#include "ntnsim/phy_mac.hpp"
#include "ntnsim/rng.hpp"
#include "ntnsim/tcp.hpp"

namespace ntnsim {

namespace {

using constants::light_speed_km_s;

Orbit scenario_orbit(const ScenarioConfig& cfg) {
    // Equatorial prograde orbit with the satellite over (0, 0) at t = 0;
    // the GEO preset altitude then sits (almost) still over the cell.
    return Orbit{cfg.satellite.altitude_km, 0.0, 0.0, 0.0};
}

GroundPosition point_at(double central_angle_deg, double azimuth_rad) {
    // Destination at angular distance lambda from (0, 0) along the given
    // azimuth (0 = north).
    const double lam = constants::deg_to_rad(central_angle_deg);
    const double lat = std::asin(std::sin(lam) * std::cos(azimuth_rad));
    const double lon = std::atan2(std::sin(azimuth_rad) * std::sin(lam), std::cos(lam));
    return GroundPosition{constants::rad_to_deg(lat), constants::rad_to_deg(lon), 0.0};
}

}  // namespace

std::vector<GroundPosition> place_ues(const ScenarioConfig& cfg) {
    if (cfg.ues.count < 1) throw std::invalid_argument("place_ues: count must be >= 1");
    const double cell_lambda =
        beam_central_angle_deg(cfg.satellite.altitude_km, cfg.half_beamwidth_deg_resolved());
    const double region_lambda =
        cfg.ues.placement == Placement::CellCenter ? 0.01 * cell_lambda : cell_lambda;

    RngStream rng(cfg.sim.seed, "placement");
    std::vector<GroundPosition> ues;
    ues.reserve(static_cast<std::size_t>(cfg.ues.count));
    const double cos_max = std::cos(constants::deg_to_rad(region_lambda));
    for (int i = 0; i < cfg.ues.count; ++i) {
        const double u = rng.uniform01();
        const double az = rng.uniform01() * 2.0 * constants::pi;
        const double cos_lambda = 1.0 - u * (1.0 - cos_max);
        ues.push_back(point_at(constants::rad_to_deg(std::acos(cos_lambda)), az));
    }
    return ues;
}

GroundPosition gateway_position(const ScenarioConfig& cfg) {
    const double e = cfg.satellite.gateway_elevation_deg;
    const double r = constants::earth_radius_km + cfg.satellite.altitude_km;
    const double lambda =
        90.0 - e -
        constants::rad_to_deg(
            std::asin(constants::earth_radius_km * std::cos(constants::deg_to_rad(e)) / r));
    return GroundPosition{0.0, -lambda, 0.0};
}

double rtt_for(const ScenarioConfig& cfg, const GroundPosition& ue, double t_s) {
    const SatelliteState sat = propagate(scenario_orbit(cfg), t_s);
    if (elevation_deg(sat, ue) < 0.0)
        throw std::runtime_error("link outage: satellite below the UE horizon");
    const double service_km = (sat.position_ecef_km - ue.ecef_km()).norm();
    double one_way_km = service_km;
    if (cfg.satellite.payload == PayloadType::Transparent) {
        const GroundPosition gw = gateway_position(cfg);
        if (elevation_deg(sat, gw) < 0.0)
            throw std::runtime_error("link outage: satellite below the gateway horizon");
        one_way_km += (sat.position_ecef_km - gw.ecef_km()).norm();
    }
    return 2.0 * one_way_km / light_speed_km_s;
}

namespace {

enum class CtrlKind { None, Syn, SynAck, Ack };
enum class FlowRole { Data, Feedback, Ack };
enum class DropCause { Misalignment, Bler };

std::string role_name(FlowRole r) {
    switch (r) {
        case FlowRole::Data: return "data";
        case FlowRole::Feedback: return "feedback";
        case FlowRole::Ack: return "ack";
    }
    return "?";
}

constexpr std::int64_t ctrl_packet_bits = 320;

struct QueuedPacket {
    std::int64_t packet_id = 0;
    std::int64_t total_bits = 0;
    std::int64_t sent_bits = 0;
    TimeNs created = 0;
    std::int64_t tcp_seq = -1;
    CtrlKind ctrl = CtrlKind::None;
    std::int64_t ctrl_value = 0;
};

struct TbPiece {
    std::int64_t packet_id = 0;
    std::int64_t bits = 0;
    std::int64_t packet_total_bits = 0;
    TimeNs created = 0;
    std::int64_t tcp_seq = -1;
    CtrlKind ctrl = CtrlKind::None;
    std::int64_t ctrl_value = 0;
    bool counts = true;  // app data bits; ctrl overhead is excluded from byte accounting
};

struct TransportBlock {
    int flow = 0;
    std::int64_t bits = 0;
    std::vector<TbPiece> pieces;
    int process_id = -1;
    bool ok = false;
    DropCause cause = DropCause::Bler;
};

struct MacFlow {
    int index = 0;
    std::string id;
    int ue = 0;
    Direction dir = Direction::Dl;
    FlowRole role = FlowRole::Data;
    TransportKind kind = TransportKind::Udp;
    double source_rate_bps = 0.0;
    std::int64_t packet_bits = 0;
    TimeNs start = 0;
    TimeNs active_from = 0;

    std::deque<QueuedPacket> queue;
    std::int64_t queued_data_bits = 0;  // data bits only, excludes ctrl
    std::int64_t queued_total_bits = 0;
    std::unique_ptr<HarqEntity> harq;
    std::map<int, std::shared_ptr<TransportBlock>> open_tbs;  // by process id
    std::int64_t next_packet_id = 0;

    // accounting (app data bits only)
    std::int64_t offered_bits = 0;
    std::int64_t delivered_bits = 0;
    DropCounts drops;
    std::int64_t unresolved_bits = 0;  // granted but not yet delivered/dropped
    std::vector<double> latencies_s;

    // receive-side reassembly: packet id -> bits received so far
    std::map<std::int64_t, std::int64_t> rx_progress;

    // tcp wiring (data flows with kind == Tcp)
    std::unique_ptr<TcpSender> tcp_tx;
    std::unique_ptr<TcpReceiver> tcp_rx;
    std::map<std::int64_t, TimeNs> tcp_created;  // seq -> app creation time
    std::int64_t tcp_segments_created = 0;
    std::int64_t tcp_segments_delivered = 0;
    int ack_flow = -1;    // reverse flow carrying ACKs/SYN-ACK
    int data_flow = -1;   // for ack flows: the paired data flow
};

struct SlotGeom {
    std::vector<double> service_km;
    std::vector<double> rate_bps;
    std::vector<double> rtt_s;
    std::vector<double> one_way_delay_s;
    double feeder_km = 0.0;
    double common_ta_s = 0.0;  // service delay of the beam-center reference point
};

class Simulation {
  public:
    Simulation(const ScenarioConfig& cfg, std::string scenario_id)
        : cfg_(cfg),
          scenario_id_(std::move(scenario_id)),
          orbit_(scenario_orbit(cfg)),
          numerology_(cfg.numerology_resolved()),
          rate_table_(cfg.rate_table_resolved()),
          budget_(cfg.link_budget()),
          pattern_(build_tdd_pattern(cfg.duplex.m_dl, cfg.duplex.n_gp)),
          rng_bler_(cfg.sim.seed, "bler") {
        duration_ns_ = static_cast<TimeNs>(std::llround(cfg.sim.duration_s * 1e9));
        slot_ns_ = numerology_.slot_ns();
        ues_ = place_ues(cfg);
        gateway_ = gateway_position(cfg);
        reference_point_ = GroundPosition{0.0, 0.0, 0.0};
        build_flows();
    }

    MetricsReport run();

  private:
    void build_flows();
    MacFlow& make_flow(int ue, Direction dir, FlowRole role, TransportKind kind,
                       double rate_bps, std::int64_t packet_bits, TimeNs start);
    void wire_tcp(MacFlow& data);

    void sample_slot_geometry(TimeNs t);
    void on_slot(std::int64_t slot_index);
    void grant_direction(Direction dir, TimeNs t);
    void transmit_new(MacFlow& flow, TimeNs t);
    void transmit_block(MacFlow& flow, std::shared_ptr<TransportBlock> tb, TimeNs t,
                        std::optional<double> feedback_time_s);
    void resolve_arrival(MacFlow& flow, const std::shared_ptr<TransportBlock>& tb);
    void deliver_piece(MacFlow& flow, const TbPiece& piece);
    void account_drop(MacFlow& flow, const TransportBlock& tb, bool via_harq);

    void schedule_emission(int flow_index, std::int64_t k);
    void emit_packet(MacFlow& flow, TimeNs t);

    void enqueue_ctrl(MacFlow& flow, CtrlKind ctrl, std::int64_t value, bool front);
    void enqueue_tcp_segment(MacFlow& flow, std::int64_t seq, bool retransmit);

    double now_s() const { return static_cast<double>(queue_.now()) * 1e-9; }
    static TimeNs to_ns(double s) { return static_cast<TimeNs>(std::llround(s * 1e9)); }

    MetricsReport finalize();

    ScenarioConfig cfg_;
    std::string scenario_id_;
    Orbit orbit_;
    Numerology numerology_;
    RateTable rate_table_;
    LinkBudgetConfig budget_;
    TddPattern pattern_;
    RngStream rng_bler_;

    TimeNs duration_ns_ = 0;
    TimeNs slot_ns_ = 0;
    std::vector<GroundPosition> ues_;
    GroundPosition gateway_;
    GroundPosition reference_point_;

    std::vector<std::unique_ptr<MacFlow>> flows_;
    EventQueue queue_;
    SlotGeom geom_;
    RoundRobinPicker rr_[2];  // per direction: 0 = DL, 1 = UL
};

void Simulation::build_flows() {
    const auto& tr = cfg_.transport;
    const TimeNs start = to_ns(tr.start_s);
    for (int ue = 0; ue < cfg_.ues.count; ++ue) {
        auto& data = make_flow(ue, tr.direction, FlowRole::Data, tr.kind, tr.rate_mbps * 1e6,
                               static_cast<std::int64_t>(tr.packet_bytes) * 8, start);
        if (tr.kind == TransportKind::Tcp) {
            const Direction ack_dir =
                tr.direction == Direction::Dl ? Direction::Ul : Direction::Dl;
            auto& ack = make_flow(ue, ack_dir, FlowRole::Ack, TransportKind::Udp, 0.0,
                                  ctrl_packet_bits, start);
            data.ack_flow = ack.index;
            ack.data_flow = data.index;
            wire_tcp(data);
        }
        if (tr.feedback_kbps > 0.0) {
            const Direction fb_dir =
                tr.direction == Direction::Dl ? Direction::Ul : Direction::Dl;
            make_flow(ue, fb_dir, FlowRole::Feedback, TransportKind::Udp,
                      tr.feedback_kbps * 1e3,
                      static_cast<std::int64_t>(tr.feedback_packet_bytes) * 8, start);
        }
    }
}

MacFlow& Simulation::make_flow(int ue, Direction dir, FlowRole role, TransportKind kind,
                               double rate_bps, std::int64_t packet_bits, TimeNs start) {
    auto flow = std::make_unique<MacFlow>();
    flow->index = static_cast<int>(flows_.size());
    flow->id = "ue" + std::to_string(ue) + "/" + to_string(dir) + "/" + role_name(role);
    flow->ue = ue;
    flow->dir = dir;
    flow->role = role;
    flow->kind = kind;
    flow->source_rate_bps = rate_bps;
    flow->packet_bits = packet_bits;
    flow->start = start;
    flow->active_from = start;
    if (dir == Direction::Ul && role != FlowRole::Ack) {
        // Scheduling-request plus grant round trips before the first uplink
        // transmission opportunity. ACK/control feedback rides existing
        // allocations and is exempt.
        const double rtt0 = rtt_for(cfg_, ues_[static_cast<std::size_t>(ue)],
                                    static_cast<double>(start) * 1e-9);
        flow->active_from = start + to_ns(ul_grant_delay_s(rtt0));
    }
    flow->harq = std::make_unique<HarqEntity>(
        cfg_.harq.n, cfg_.harq.enabled, cfg_.harq.max_retx,
        static_cast<double>(cfg_.harq.processing_slots) * numerology_.slot_s());
    flows_.push_back(std::move(flow));
    return *flows_.back();
}

void Simulation::wire_tcp(MacFlow& data) {
    TcpConfig tc;
    tc.rto_s = cfg_.tcp.rto_ms * 1e-3;
    tc.rto_adaptive = cfg_.tcp.rto_adaptive;
    tc.cubic_c = cfg_.tcp.cubic_c;
    tc.cubic_beta = cfg_.tcp.cubic_beta;

    const int data_idx = data.index;
    TcpSender::Hooks tx_hooks;
    tx_hooks.send_syn = [this, data_idx] {
        enqueue_ctrl(*flows_[static_cast<std::size_t>(data_idx)], CtrlKind::Syn, 0, true);
    };
    tx_hooks.send_segment = [this, data_idx](std::int64_t seq, bool retransmit) {
        enqueue_tcp_segment(*flows_[static_cast<std::size_t>(data_idx)], seq, retransmit);
    };
    tx_hooks.set_timer = [this, data_idx](double t_abs, std::uint64_t generation) {
        TimeNs t = to_ns(t_abs);
        if (t < queue_.now()) t = queue_.now();
        queue_.schedule(t, [this, data_idx, generation] {
            auto& f = *flows_[static_cast<std::size_t>(data_idx)];
            f.tcp_tx->on_timer(now_s(), generation);
        });
    };
    data.tcp_tx = std::make_unique<TcpSender>(tc, std::move(tx_hooks));

    TcpReceiver::Hooks rx_hooks;
    rx_hooks.send_ack = [this, data_idx](std::int64_t ack_seq) {
        auto& data_flow = *flows_[static_cast<std::size_t>(data_idx)];
        enqueue_ctrl(*flows_[static_cast<std::size_t>(data_flow.ack_flow)], CtrlKind::Ack,
                     ack_seq, false);
    };
    rx_hooks.send_syn_ack = [this, data_idx] {
        auto& data_flow = *flows_[static_cast<std::size_t>(data_idx)];
        enqueue_ctrl(*flows_[static_cast<std::size_t>(data_flow.ack_flow)], CtrlKind::SynAck, 0,
                     true);
    };
    rx_hooks.deliver = [this, data_idx](std::int64_t seq) {
        auto& f = *flows_[static_cast<std::size_t>(data_idx)];
        f.delivered_bits += f.packet_bits;
        f.tcp_segments_delivered += 1;
        const auto it = f.tcp_created.find(seq);
        if (it != f.tcp_created.end()) {
            f.latencies_s.push_back(static_cast<double>(queue_.now() - it->second) * 1e-9);
            f.tcp_created.erase(it);
        }
    };
    data.tcp_rx = std::make_unique<TcpReceiver>(std::move(rx_hooks));
}

void Simulation::sample_slot_geometry(TimeNs t) {
    const double t_s = static_cast<double>(t) * 1e-9;
    const SatelliteState sat = propagate(orbit_, t_s);

    geom_.feeder_km = (sat.position_ecef_km - gateway_.ecef_km()).norm();
    if (elevation_deg(sat, gateway_) < 0.0)
        throw std::runtime_error("link outage: satellite below the gateway horizon");
    geom_.common_ta_s =
        (sat.position_ecef_km - reference_point_.ecef_km()).norm() / light_speed_km_s;

    const std::size_t n = ues_.size();
    geom_.service_km.assign(n, 0.0);
    geom_.rate_bps.assign(n, 0.0);
    geom_.rtt_s.assign(n, 0.0);
    geom_.one_way_delay_s.assign(n, 0.0);
    const bool transparent = cfg_.satellite.payload == PayloadType::Transparent;
    for (std::size_t i = 0; i < n; ++i) {
        if (elevation_deg(sat, ues_[i]) < 0.0)
            throw std::runtime_error("link outage: satellite below the UE horizon");
        const double service = (sat.position_ecef_km - ues_[i].ecef_km()).norm();
        geom_.service_km[i] = service;
        const double snr = snr_db(budget_, service, cfg_.f_c_hz(), cfg_.bandwidth_hz());
        geom_.rate_bps[i] = rate_table_.rate_bps(snr, cfg_.bandwidth_hz());
        const double one_way = (service + (transparent ? geom_.feeder_km : 0.0)) / light_speed_km_s;
        geom_.one_way_delay_s[i] = one_way;
        geom_.rtt_s[i] = 2.0 * one_way;
    }
}

void Simulation::on_slot(std::int64_t slot_index) {
    const TimeNs t = slot_index * slot_ns_;
    sample_slot_geometry(t);

    if (cfg_.duplex.mode == DuplexMode::Fdd) {
        // Two independent slot streams, no guard periods.
        grant_direction(Direction::Dl, t);
        grant_direction(Direction::Ul, t);
    } else {
        switch (pattern_.slot_type(slot_index)) {
            case SlotType::Downlink: grant_direction(Direction::Dl, t); break;
            case SlotType::Uplink: grant_direction(Direction::Ul, t); break;
            case SlotType::Guard: break;  // nothing may be scheduled
        }
    }

    const TimeNs next = t + slot_ns_;
    if (next <= duration_ns_)
        queue_.schedule(next, [this, slot_index] { on_slot(slot_index + 1); });
}

void Simulation::grant_direction(Direction dir, TimeNs t) {
    std::vector<bool> eligible(flows_.size(), false);
    for (const auto& fp : flows_) {
        const MacFlow& f = *fp;
        if (f.dir != dir || t < f.active_from) continue;
        if (geom_.rate_bps[static_cast<std::size_t>(f.ue)] <= 0.0) continue;
        const bool has_retx = cfg_.harq.enabled && f.harq->next_pending_retx().has_value();
        const bool has_new =
            f.queued_total_bits > 0 && (!cfg_.harq.enabled || f.harq->in_flight() < cfg_.harq.n);
        eligible[static_cast<std::size_t>(f.index)] = has_retx || has_new;
    }
    const auto picked = rr_[dir == Direction::Ul ? 1 : 0].pick(eligible);
    if (!picked) return;

    MacFlow& flow = *flows_[*picked];
    // Pending retransmissions take priority over new data on this flow.
    if (cfg_.harq.enabled) {
        if (const auto pid = flow.harq->next_pending_retx()) {
            auto tb = flow.open_tbs.at(*pid);
            const auto fb = flow.harq->on_retransmit(
                *pid, now_s(), geom_.rtt_s[static_cast<std::size_t>(flow.ue)]);
            transmit_block(flow, tb, t, fb);
            return;
        }
    }
    transmit_new(flow, t);
}

void Simulation::transmit_new(MacFlow& flow, TimeNs t) {
    const auto pid = flow.harq->try_acquire();
    if (!pid) return;  // all processes waiting: HARQ stall

    const double rate = geom_.rate_bps[static_cast<std::size_t>(flow.ue)];
    const auto tb_capacity =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(rate * numerology_.slot_s()));

    auto tb = std::make_shared<TransportBlock>();
    tb->flow = flow.index;
    tb->process_id = *pid;
    std::int64_t budget = tb_capacity;
    while (budget > 0 && !flow.queue.empty()) {
        QueuedPacket& pkt = flow.queue.front();
        const std::int64_t chunk = std::min(budget, pkt.total_bits - pkt.sent_bits);
        TbPiece piece;
        piece.packet_id = pkt.packet_id;
        piece.bits = chunk;
        piece.packet_total_bits = pkt.total_bits;
        piece.created = pkt.created;
        piece.tcp_seq = pkt.tcp_seq;
        piece.ctrl = pkt.ctrl;
        piece.ctrl_value = pkt.ctrl_value;
        piece.counts = pkt.ctrl == CtrlKind::None;
        tb->pieces.push_back(piece);
        tb->bits += chunk;
        pkt.sent_bits += chunk;
        budget -= chunk;
        if (piece.counts) {
            flow.queued_data_bits -= chunk;
            flow.unresolved_bits += chunk;
        }
        flow.queued_total_bits -= chunk;
        if (pkt.sent_bits == pkt.total_bits) flow.queue.pop_front();
    }
    if (tb->pieces.empty()) {
        flow.harq->on_feedback(*pid, true);  // nothing to send, release
        return;
    }

    const auto fb = flow.harq->on_transmit(*pid, now_s(),
                                           geom_.rtt_s[static_cast<std::size_t>(flow.ue)],
                                           tb->bits, static_cast<std::uint64_t>(flow.index));
    if (cfg_.harq.enabled) flow.open_tbs[*pid] = tb;
    transmit_block(flow, tb, t, fb);
}

void Simulation::transmit_block(MacFlow& flow, std::shared_ptr<TransportBlock> tb, TimeNs t,
                                std::optional<double> feedback_time_s) {
    const std::size_t ue = static_cast<std::size_t>(flow.ue);

    // Outcome decided per transmission attempt: uplink frame alignment at
    // the gNB first, then the block error draw.
    tb->ok = true;
    if (flow.dir == Direction::Ul) {
        const double true_delay = geom_.service_km[ue] / light_speed_km_s;
        TimingAdvance ta;
        ta.common_ta_s = geom_.common_ta_s;
        ta.ue_specific_ta_s = cfg_.ta.gnss ? true_delay - geom_.common_ta_s : 0.0;
        ta.gnss_available = cfg_.ta.gnss;
        const AlignmentTolerance tol{cfg_.ta.tolerance_slots * numerology_.slot_s()};
        const auto check = ul_alignment_check(true_delay, compute_applied_ta_s(ta), tol);
        if (!check.aligned) {
            tb->ok = false;
            tb->cause = DropCause::Misalignment;
        }
    }
    if (tb->ok && cfg_.channel.bler > 0.0 && rng_bler_.bernoulli(cfg_.channel.bler)) {
        tb->ok = false;
        tb->cause = DropCause::Bler;
    }

    const TimeNs arrival = t + slot_ns_ + to_ns(geom_.one_way_delay_s[ue]);
    const int flow_idx = flow.index;
    queue_.schedule(arrival, [this, flow_idx, tb] {
        resolve_arrival(*flows_[static_cast<std::size_t>(flow_idx)], tb);
    });

    if (feedback_time_s) {
        const int pid = tb->process_id;
        queue_.schedule(to_ns(*feedback_time_s), [this, flow_idx, pid, tb] {
            auto& f = *flows_[static_cast<std::size_t>(flow_idx)];
            const auto outcome = f.harq->on_feedback(pid, tb->ok);
            if (outcome != HarqFeedbackOutcome::Retransmit) {
                f.open_tbs.erase(pid);
                if (outcome == HarqFeedbackOutcome::Dropped) account_drop(f, *tb, true);
            }
            // Retransmit: the process stays pending until the scheduler
            // grants it a slot.
        });
    }
}

void Simulation::resolve_arrival(MacFlow& flow, const std::shared_ptr<TransportBlock>& tb) {
    if (!tb->ok) {
        // Dropped at the receiver. Without a feedback loop the block dies
        // here; with HARQ the NACK path decides its fate.
        if (!flow.harq->feedback_enabled()) account_drop(flow, *tb, false);
        return;
    }
    for (const auto& piece : tb->pieces) deliver_piece(flow, piece);
}

void Simulation::deliver_piece(MacFlow& flow, const TbPiece& piece) {
    auto& received = flow.rx_progress[piece.packet_id];
    received += piece.bits;
    if (piece.counts) {
        flow.unresolved_bits -= piece.bits;
        if (flow.kind != TransportKind::Tcp) flow.delivered_bits += piece.bits;
    }
    if (received < piece.packet_total_bits) return;
    flow.rx_progress.erase(piece.packet_id);

    switch (piece.ctrl) {
        case CtrlKind::None: break;
        case CtrlKind::Syn: {
            flows_[static_cast<std::size_t>(flow.index)]->tcp_rx->on_syn();
            return;
        }
        case CtrlKind::SynAck: {
            auto& data = *flows_[static_cast<std::size_t>(flow.data_flow)];
            data.tcp_tx->on_syn_ack(now_s());
            return;
        }
        case CtrlKind::Ack: {
            auto& data = *flows_[static_cast<std::size_t>(flow.data_flow)];
            data.tcp_tx->on_ack(now_s(), piece.ctrl_value);
            return;
        }
    }

    if (flow.kind == TransportKind::Tcp) {
        flow.tcp_rx->on_segment(piece.tcp_seq);
    } else {
        flow.latencies_s.push_back(static_cast<double>(queue_.now() - piece.created) * 1e-9);
    }
}

void Simulation::account_drop(MacFlow& flow, const TransportBlock& tb, bool via_harq) {
    for (const auto& piece : tb.pieces) {
        if (!piece.counts) continue;
        flow.unresolved_bits -= piece.bits;
        if (flow.kind == TransportKind::Tcp) continue;  // TCP recovers above MAC
        if (via_harq) {
            flow.drops.retx_exhaustion_bits += piece.bits;
        } else if (tb.cause == DropCause::Misalignment) {
            flow.drops.misalignment_bits += piece.bits;
        } else {
            flow.drops.bler_bits += piece.bits;
        }
    }
}

void Simulation::schedule_emission(int flow_index, std::int64_t k) {
    MacFlow& flow = *flows_[static_cast<std::size_t>(flow_index)];
    const double interval_ns = static_cast<double>(flow.packet_bits) * 1e9 / flow.source_rate_bps;
    const TimeNs t = flow.start + static_cast<TimeNs>(std::llround(static_cast<double>(k) * interval_ns));
    if (t >= duration_ns_) return;
    queue_.schedule(t, [this, flow_index, k] {
        auto& f = *flows_[static_cast<std::size_t>(flow_index)];
        emit_packet(f, queue_.now());
        schedule_emission(flow_index, k + 1);
    });
}

void Simulation::emit_packet(MacFlow& flow, TimeNs t) {
    flow.offered_bits += flow.packet_bits;
    if (flow.kind == TransportKind::Tcp) {
        const std::int64_t seq = flow.tcp_segments_created++;
        flow.tcp_created.emplace(seq, t);
        flow.tcp_tx->on_app_data(now_s(), flow.tcp_segments_created);
        return;
    }
    QueuedPacket pkt;
    pkt.packet_id = flow.next_packet_id++;
    pkt.total_bits = flow.packet_bits;
    pkt.created = t;
    flow.queue.push_back(pkt);
    flow.queued_data_bits += pkt.total_bits;
    flow.queued_total_bits += pkt.total_bits;
}

void Simulation::enqueue_ctrl(MacFlow& flow, CtrlKind ctrl, std::int64_t value, bool front) {
    QueuedPacket pkt;
    pkt.packet_id = flow.next_packet_id++;
    pkt.total_bits = ctrl_packet_bits;
    pkt.created = queue_.now();
    pkt.ctrl = ctrl;
    pkt.ctrl_value = value;
    if (front) flow.queue.push_front(pkt);
    else flow.queue.push_back(pkt);
    flow.queued_total_bits += pkt.total_bits;
}

void Simulation::enqueue_tcp_segment(MacFlow& flow, std::int64_t seq, bool retransmit) {
    QueuedPacket pkt;
    pkt.packet_id = flow.next_packet_id++;
    pkt.total_bits = flow.packet_bits;
    pkt.created = queue_.now();
    pkt.tcp_seq = seq;
    if (retransmit) flow.queue.push_front(pkt);
    else flow.queue.push_back(pkt);
    flow.queued_data_bits += pkt.total_bits;
    flow.queued_total_bits += pkt.total_bits;
}

MetricsReport Simulation::run() {
    // Slot engine.
    queue_.schedule(0, [this] { on_slot(0); });
    // Application sources.
    for (const auto& fp : flows_) {
        if (fp->role == FlowRole::Ack) continue;
        if (fp->kind == TransportKind::Tcp) {
            const int idx = fp->index;
            queue_.schedule(fp->start, [this, idx] {
                flows_[static_cast<std::size_t>(idx)]->tcp_tx->start(now_s());
            });
        }
        schedule_emission(fp->index, 0);
    }

    while (!queue_.empty() && queue_.next_time() <= duration_ns_) queue_.run_next();
    return finalize();
}

MetricsReport Simulation::finalize() {
    MetricsReport report;
    report.scenario_id = scenario_id_;

    auto& e = report.echo;
    e.altitude_km = cfg_.satellite.altitude_km;
    e.band = to_string(cfg_.band.name);
    e.bler = cfg_.channel.bler;
    e.duplex_mode = to_string(cfg_.duplex.mode);
    e.duration_s = cfg_.sim.duration_s;
    e.gnss = cfg_.ta.gnss ? "on" : "off";
    e.half_beamwidth_deg = cfg_.half_beamwidth_deg_resolved();
    e.harq_enabled = cfg_.harq.enabled ? "on" : "off";
    e.harq_n = cfg_.harq.n;
    e.m_dl = cfg_.duplex.m_dl;
    e.n_gp = cfg_.duplex.n_gp;
    e.numerology = cfg_.numerology_resolved();
    e.payload = to_string(cfg_.satellite.payload);
    e.placement = to_string(cfg_.ues.placement);
    e.seed = cfg_.sim.seed;
    e.tolerance_slots = cfg_.ta.tolerance_slots;
    e.transport = to_string(cfg_.transport.kind);
    e.ue_count = cfg_.ues.count;

    double cell_delivered_bits = 0.0;
    for (auto& fp : flows_) {
        MacFlow& f = *fp;
        FlowMetrics m;
        m.flow_id = f.id;
        m.direction = to_string(f.dir);
        m.role = role_name(f.role);
        m.source_rate_mbps = f.source_rate_bps / 1e6;
        m.offered_bits = f.offered_bits;
        m.delivered_bits = f.delivered_bits;
        m.drops = f.drops;
        if (f.kind == TransportKind::Tcp) {
            m.residual_bits =
                (f.tcp_segments_created - f.tcp_segments_delivered) * f.packet_bits;
        } else {
            m.residual_bits = f.queued_data_bits + f.unresolved_bits;
        }
        m.latency_samples_s = std::move(f.latencies_s);
        m.finalize(cfg_.sim.duration_s);
        if (f.role == FlowRole::Data) cell_delivered_bits += static_cast<double>(f.delivered_bits);
        report.harq_violations += f.harq->violations();
        report.flows.push_back(std::move(m));
    }
    report.cell_throughput_bps = cell_delivered_bits / cfg_.sim.duration_s;
    return report;
}

}  // namespace

MetricsReport run_scenario(const ScenarioConfig& cfg, const std::string& scenario_id) {
    const auto issues = validate_config(cfg);
    if (!issues.empty()) throw ConfigError(issues);
    Simulation sim(cfg, scenario_id);
    return sim.run();
}

}  // namespace ntnsim
