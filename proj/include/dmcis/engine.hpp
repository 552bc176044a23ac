#pragma once

#include "dmcis/errors.hpp"
#include "dmcis/geometry.hpp"

#include <cstdint>
#include <queue>
#include <string>
#include <vector>

namespace dmcis {

enum class Action {
    sensor_sample,
    sdcc_window_close,
    manual_insert,
    contact_check_tick,
    transfer_complete,
    dpc_process_complete,
    dpc_reprocess_deadline,
    peer_summary,
    cdc_decision,
    dcc_warning,
    dcc_dissemination_complete,
    emergency_call,
    sensor_failure,
};

// Action-specific parameters live in `a`, `b` and `token`; their meaning is
// defined by whoever schedules the action.
struct ScheduledEvent {
    SimTime fire_at = 0.0;
    std::uint64_t seq = 0;
    Action action = Action::sensor_sample;
    int a = 0;
    int b = 0;
    std::uint64_t token = 0;
};

// Continuous-time event queue ordered by (fire_at, seq).
class Engine {
public:
    SimTime now() const { return clock_; }

    std::uint64_t schedule(SimTime at, Action action, int a = 0, int b = 0, std::uint64_t token = 0)
    {
        if (at < clock_)
            throw SchedulingInPast("event at t=" + std::to_string(at) + " scheduled at clock "
                                   + std::to_string(clock_));
        ScheduledEvent ev{at, next_seq_++, action, a, b, token};
        queue_.push(ev);
        return ev.seq;
    }

    // Fires every event with fire_at <= horizon in order, then parks the clock
    // at the horizon. Handlers may schedule further events.
    template <class Handler>
    std::size_t run_until(SimTime horizon, Handler&& handler)
    {
        if (horizon < clock_)
            throw SchedulingInPast("horizon " + std::to_string(horizon) + " is before clock "
                                   + std::to_string(clock_));
        std::size_t count = 0;
        while (!queue_.empty() && queue_.top().fire_at <= horizon) {
            ScheduledEvent ev = queue_.top();
            queue_.pop();
            clock_ = ev.fire_at;
            ++fired_;
            ++count;
            handler(ev);
        }
        clock_ = horizon;
        return count;
    }

    std::uint64_t scheduled() const { return next_seq_; }
    std::uint64_t fired() const { return fired_; }
    std::size_t pending() const { return queue_.size(); }
    bool empty() const { return queue_.empty(); }
    const ScheduledEvent& peek() const { return queue_.top(); }

private:
    struct Later {
        bool operator()(const ScheduledEvent& x, const ScheduledEvent& y) const
        {
            if (x.fire_at != y.fire_at)
                return x.fire_at > y.fire_at;
            return x.seq > y.seq;
        }
    };

    std::priority_queue<ScheduledEvent, std::vector<ScheduledEvent>, Later> queue_;
    SimTime clock_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t fired_ = 0;
};

} // namespace dmcis
