#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "ntnsim/geometry.hpp"
#include "ntnsim/harq.hpp"
#include "ntnsim/rng.hpp"

using namespace ntnsim;

TEST_CASE("try_acquire: grants until all n processes wait, then stalls") {
    HarqEntity entity(8, true, 3, 0.0);
    for (int i = 0; i < 8; ++i) {
        const auto pid = entity.try_acquire();
        REQUIRE(pid.has_value());
        entity.on_transmit(*pid, 0.0, 0.020, 1000, 0);
    }
    CHECK(entity.in_flight() == 8);
    CHECK_FALSE(entity.try_acquire().has_value());  // stall

    CHECK(entity.on_feedback(0, true) == HarqFeedbackOutcome::Released);
    CHECK(entity.in_flight() == 7);
    CHECK(entity.try_acquire().has_value());
}

TEST_CASE("feedback disabled: always granted, released at transmit") {
    HarqEntity entity(2, false, 3, 0.0);
    for (int i = 0; i < 50; ++i) {
        const auto pid = entity.try_acquire();
        REQUIRE(pid.has_value());
        CHECK_FALSE(entity.on_transmit(*pid, 0.0, 0.541, 1000, 0).has_value());
        CHECK(entity.in_flight() == 0);
    }
}

TEST_CASE("on_transmit: feedback at t + rtt + processing") {
    HarqEntity entity(4, true, 3, 2e-3);
    const auto pid = entity.try_acquire();
    REQUIRE(pid.has_value());
    const auto fb = entity.on_transmit(*pid, 1.0, 20e-3, 1000, 7);
    REQUIRE(fb.has_value());
    CHECK(*fb == doctest::Approx(1.0 + 20e-3 + 2e-3));
    CHECK(entity.process(*pid).tb_bits == 1000);
    CHECK(entity.process(*pid).tb_tag == 7);

    // Degenerate zero-delay case.
    HarqEntity instant(1, true, 0, 0.0);
    const auto p2 = instant.try_acquire();
    CHECK(*instant.on_transmit(*p2, 5.0, 0.0, 1, 0) == doctest::Approx(5.0));

    // Transmit on an idle process violates the contract.
    HarqEntity bad(2, true, 3, 0.0);
    CHECK_THROWS_AS(bad.on_transmit(0, 0.0, 0.0, 1, 0), std::logic_error);
}

TEST_CASE("on_feedback: ack releases, nack retransmits until exhaustion") {
    HarqEntity entity(2, true, 2, 0.0);
    const auto pid = entity.try_acquire();
    entity.on_transmit(*pid, 0.0, 0.01, 500, 0);

    CHECK(entity.on_feedback(*pid, false) == HarqFeedbackOutcome::Retransmit);
    CHECK(entity.next_pending_retx() == *pid);
    entity.on_retransmit(*pid, 0.02, 0.01);
    CHECK(entity.process(*pid).retx_count == 1);

    CHECK(entity.on_feedback(*pid, false) == HarqFeedbackOutcome::Retransmit);
    entity.on_retransmit(*pid, 0.04, 0.01);
    CHECK(entity.process(*pid).retx_count == 2);

    // retx_count reached max_retx: the next NACK drops the block.
    CHECK(entity.on_feedback(*pid, false) == HarqFeedbackOutcome::Dropped);
    CHECK(entity.in_flight() == 0);

    // Feedback on an idle process is rejected.
    CHECK_THROWS_AS(entity.on_feedback(*pid, true), std::logic_error);
}

namespace {

// Minimal reference model for the per-process state machine.
struct RefProcess {
    enum { Idle, Waiting, Pending } state = Idle;
    int retx = 0;
};

}  // namespace

TEST_CASE("state machine: random walk against a two-process reference model") {
    const int max_retx = 2;
    HarqEntity entity(2, true, max_retx, 0.0);
    RefProcess ref[2];
    RngStream rng(123, "harq-walk");

    for (int step = 0; step < 20000; ++step) {
        const int action = static_cast<int>(rng.next_u64() % 4);
        const int p = static_cast<int>(rng.next_u64() % 2);
        const bool ack = rng.bernoulli(0.5);
        switch (action) {
            case 0: {  // acquire
                const bool ref_free = ref[0].state == RefProcess::Idle ||
                                      ref[1].state == RefProcess::Idle;
                const auto pid = entity.try_acquire();
                CHECK(pid.has_value() == ref_free);
                if (pid) {
                    REQUIRE(ref[*pid].state == RefProcess::Idle);
                    ref[*pid].state = RefProcess::Waiting;
                    ref[*pid].retx = 0;
                    entity.on_transmit(*pid, 0.0, 0.0, 1, 0);
                }
                break;
            }
            case 1: {  // feedback
                if (ref[p].state != RefProcess::Waiting) {
                    CHECK_THROWS_AS(entity.on_feedback(p, ack), std::logic_error);
                    break;
                }
                const auto outcome = entity.on_feedback(p, ack);
                if (ack) {
                    CHECK(outcome == HarqFeedbackOutcome::Released);
                    ref[p].state = RefProcess::Idle;
                } else if (ref[p].retx >= max_retx) {
                    CHECK(outcome == HarqFeedbackOutcome::Dropped);
                    ref[p].state = RefProcess::Idle;
                } else {
                    CHECK(outcome == HarqFeedbackOutcome::Retransmit);
                    ref[p].state = RefProcess::Pending;
                }
                break;
            }
            case 2: {  // retransmit
                if (ref[p].state != RefProcess::Pending) {
                    CHECK_THROWS_AS(entity.on_retransmit(p, 0.0, 0.0), std::logic_error);
                    break;
                }
                entity.on_retransmit(p, 0.0, 0.0);
                ref[p].state = RefProcess::Waiting;
                ref[p].retx += 1;
                break;
            }
            default: {  // cross-check observable state
                const int ref_in_flight = (ref[0].state != RefProcess::Idle) +
                                          (ref[1].state != RefProcess::Idle);
                CHECK(entity.in_flight() == ref_in_flight);
                break;
            }
        }
        CHECK(entity.in_flight() <= 2);
    }
    CHECK(entity.violations() == 0);
}

TEST_CASE("bler recovery: mean transmissions approach 1/(1-p)") {
    const double p = 0.3;
    HarqEntity entity(1, true, 1000000000, 0.0);
    RngStream rng(7, "bler-test");

    std::int64_t transmissions = 0;
    const int blocks = 20000;
    for (int tb = 0; tb < blocks; ++tb) {
        const auto pid = entity.try_acquire();
        REQUIRE(pid.has_value());
        entity.on_transmit(*pid, 0.0, 0.0, 1, 0);
        ++transmissions;
        while (entity.on_feedback(*pid, !rng.bernoulli(p)) == HarqFeedbackOutcome::Retransmit) {
            entity.on_retransmit(*pid, 0.0, 0.0);
            ++transmissions;
        }
    }
    const double mean = static_cast<double>(transmissions) / blocks;
    CHECK(mean == doctest::Approx(1.0 / (1.0 - p)).epsilon(0.05));
    CHECK(entity.violations() == 0);
}

TEST_CASE("predict_saturation: GEO needs hundreds of processes") {
    // GEO transparent worst case: both legs at 10 degrees.
    const double rtt = 4.0 * propagation_delay_s(slant_range_km(35786.0, 10.0));
    const Numerology mu0(0);
    const auto pred = predict_saturation(rtt, 4.0 * mu0.slot_s(), mu0);
    CHECK(pred.n_star >= 541);
    CHECK(pred.n_star <= 600);

    // n = 16 on a 541 ms turnaround keeps the link busy only ~3% of the
    // time: the stall the figure shows.
    CHECK(pred.duty(16) < 0.035);
    CHECK(pred.duty(16) > 0.025);
}

TEST_CASE("predict_saturation: degenerate and linear regimes") {
    const Numerology mu0(0);
    CHECK(predict_saturation(0.0, 0.0, mu0).n_star == 1);
    CHECK(predict_saturation(0.5e-3, 0.2e-3, mu0).n_star == 1);

    const auto pred = predict_saturation(0.1, 0.0, mu0);
    CHECK(pred.duty(8) / pred.duty(32) == doctest::Approx(0.25));
    CHECK(pred.duty(1000) == 1.0);

    double prev = 0.0;
    for (int n : {1, 2, 4, 8, 16, 32, 64, 128}) {
        CHECK(pred.duty(n) >= prev);
        prev = pred.duty(n);
    }
}
