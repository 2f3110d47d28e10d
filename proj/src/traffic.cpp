#include "vanetlab/traffic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vanetlab/rng.hpp"

namespace vanetlab {

const char* to_string(FrameKind kind) {
    switch (kind) {
        case FrameKind::data: return "data";
        case FrameKind::rreq: return "rreq";
        case FrameKind::rrep: return "rrep";
        case FrameKind::rerr: return "rerr";
        case FrameKind::fsr_update: return "fsr-update";
        case FrameKind::hello: return "hello";
        case FrameKind::tc: return "tc";
    }
    return "?";
}

const char* to_string(DropCause cause) {
    switch (cause) {
        case DropCause::no_route: return "no_route";
        case DropCause::send_buffer_overflow: return "send_buffer_overflow";
        case DropCause::send_buffer_timeout: return "send_buffer_timeout";
        case DropCause::mac_queue_overflow: return "mac_queue_overflow";
        case DropCause::retry_exhausted: return "retry_exhausted";
        case DropCause::salvage_limit: return "salvage_limit";
        case DropCause::ttl_expired: return "ttl_expired";
        case DropCause::discovery_failed: return "discovery_failed";
    }
    return "?";
}

std::vector<Flow> spawn_flows(int n_connections, int nodes, const TrafficConfig& cfg,
                              double duration, uint64_t seed) {
    if (nodes < 2) throw std::domain_error("spawn_flows: need at least 2 nodes");
    long max_pairs = static_cast<long>(nodes) * (nodes - 1);
    if (n_connections < 0 || n_connections > max_pairs)
        throw std::domain_error("spawn_flows: connection count infeasible for node count");

    auto rng = make_stream(seed, 0, RngPurpose::traffic);
    std::set<std::pair<int, int>> chosen;
    std::vector<Flow> flows;
    while (static_cast<int>(flows.size()) < n_connections) {
        int src = uniform_int(rng, 0, nodes - 1);
        int dst = uniform_int(rng, 0, nodes - 1);
        if (src == dst) continue;
        if (!chosen.insert({src, dst}).second) continue;
        Flow f;
        f.src = src;
        f.dst = dst;
        f.packet_size = cfg.packet_size;
        f.rate = cfg.rate;
        f.start = uniform(rng, 0.0, cfg.start_window);
        f.stop = duration;
        flows.push_back(f);
    }
    return flows;
}

long MetricsReport::drops_total() const {
    long total = 0;
    for (long d : drops) total += d;
    return total;
}

long MetricsReport::control_tx_total() const {
    long total = 0;
    for (int k = 0; k < kFrameKindCount; ++k)
        if (static_cast<FrameKind>(k) != FrameKind::data) total += tx_by_kind[k];
    return total;
}

void MetricsCollector::record_send(long packet_id, double t) {
    if (!send_time_.emplace(packet_id, t).second)
        throw std::logic_error("MetricsCollector: duplicate send record for packet id");
}

void MetricsCollector::record_delivery(long packet_id, double t) {
    auto it = send_time_.find(packet_id);
    if (it == send_time_.end())
        throw std::logic_error("MetricsCollector: delivery without matching send record");
    if (!delivered_.insert(packet_id).second) {
        ++duplicates_;
        return;
    }
    e2ed_sum_ += t - it->second;
}

MetricsReport MetricsCollector::compute(double duration, int packet_size) const {
    if (!(duration > 0.0)) throw std::domain_error("MetricsCollector: duration must be > 0");
    MetricsReport r;
    r.sent = sent();
    r.delivered = delivered();
    r.duplicate_deliveries = duplicates_;
    r.drops = drops_;
    r.tx_by_kind = tx_;
    r.in_flight = r.sent - r.delivered - r.drops_total();
    if (r.in_flight < 0)
        throw std::logic_error("MetricsCollector: packet conservation violated");

    r.throughput_kbps = r.delivered * static_cast<double>(packet_size) * 8.0 / duration / 1000.0;
    if (r.delivered > 0) {
        r.e2ed_s = e2ed_sum_ / r.delivered;
        r.nrl = static_cast<double>(r.control_tx_total()) / r.delivered;
    } else {
        r.degenerate = true;
        r.e2ed_s = std::numeric_limits<double>::quiet_NaN();
        r.nrl = std::numeric_limits<double>::infinity();
    }
    return r;
}

}  // namespace vanetlab
