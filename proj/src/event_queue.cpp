#include "vanetlab/event_queue.hpp"

#include <algorithm>
#include <stdexcept>

namespace vanetlab {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::mobility_update: return "mobility-update";
        case EventKind::mac_slot: return "mac-slot";
        case EventKind::frame_delivery: return "frame-delivery";
        case EventKind::protocol_timer: return "protocol-timer";
        case EventKind::traffic_tick: return "traffic-tick";
        case EventKind::metrics_sample: return "metrics-sample";
    }
    return "?";
}

bool EventQueue::later(const Event& a, const Event& b) {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
}

void EventQueue::schedule(double time, EventKind kind, int node, std::function<void()> fn) {
    if (time < now_)
        throw std::logic_error("EventQueue: scheduling into the past (t=" + std::to_string(time) +
                               " < now=" + std::to_string(now_) + ")");
    heap_.push_back(Event{time, next_seq_++, kind, node, std::move(fn)});
    std::push_heap(heap_.begin(), heap_.end(), later);
}

double EventQueue::peek_time() const {
    if (heap_.empty()) throw std::logic_error("EventQueue: peek on empty queue");
    return heap_.front().time;
}

Event EventQueue::pop() {
    if (heap_.empty()) throw std::logic_error("EventQueue: pop on empty queue");
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Event e = std::move(heap_.back());
    heap_.pop_back();
    now_ = e.time;
    return e;
}

}  // namespace vanetlab
