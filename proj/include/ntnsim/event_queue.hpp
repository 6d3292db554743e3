#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ntnsim/phy_mac.hpp"

namespace ntnsim {

/// Time-ordered event queue. Dequeue order is (time, insertion sequence)
/// lexicographic, so ties resolve by insertion order and runs are
/// reproducible. Scheduling into the past is a causality violation and
/// throws.
class EventQueue {
  public:
    void schedule(TimeNs t, std::function<void()> handler) {
        if (t < now_) throw std::logic_error("event queue: scheduling into the past");
        heap_.push(Entry{t, next_sequence_++, std::move(handler)});
    }

    bool empty() const { return heap_.empty(); }
    TimeNs next_time() const { return heap_.top().t; }
    TimeNs now() const { return now_; }

    /// Pops and runs the earliest event.
    void run_next() {
        Entry e = heap_.top();
        heap_.pop();
        now_ = e.t;
        e.handler();
    }

  private:
    struct Entry {
        TimeNs t;
        std::uint64_t sequence;
        std::function<void()> handler;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.t != b.t) return a.t > b.t;
            return a.sequence > b.sequence;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    std::uint64_t next_sequence_ = 0;
    TimeNs now_ = 0;
};

}  // namespace ntnsim
