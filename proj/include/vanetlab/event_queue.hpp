#ifndef VANETLAB_EVENT_QUEUE_HPP
#define VANETLAB_EVENT_QUEUE_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace vanetlab {

enum class EventKind {
    mobility_update,
    mac_slot,
    frame_delivery,
    protocol_timer,
    traffic_tick,
    metrics_sample,
};

const char* to_string(EventKind kind);

struct Event {
    double time;
    uint64_t seq;  // insertion order, breaks time ties
    EventKind kind;
    int node;  // -1 for run-level events
    std::function<void()> fn;
};

// Deterministic (time, seq) ordered queue. Scheduling into the past is a
// logic error and aborts the run.
class EventQueue {
public:
    void schedule(double time, EventKind kind, int node, std::function<void()> fn);
    bool empty() const { return heap_.empty(); }
    double peek_time() const;
    Event pop();  // advances now() to the event time
    double now() const { return now_; }

private:
    static bool later(const Event& a, const Event& b);
    std::vector<Event> heap_;
    uint64_t next_seq_ = 0;
    double now_ = 0.0;
};

}  // namespace vanetlab

#endif
