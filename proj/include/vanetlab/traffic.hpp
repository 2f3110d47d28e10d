#ifndef VANETLAB_TRAFFIC_HPP
#define VANETLAB_TRAFFIC_HPP

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "vanetlab/frame.hpp"

namespace vanetlab {

struct Flow {
    int src;
    int dst;
    int packet_size;  // bytes
    double rate;      // packets/second
    double start;     // seconds
    double stop;      // seconds
};

struct TrafficConfig {
    int connections = 10;
    double rate = 4.0;      // packets/second per flow
    int packet_size = 512;  // bytes, CBR payload
    double start_window = 10.0;
};

// Draws n distinct ordered (src,dst) pairs with staggered starts. Seeded and
// deterministic.
std::vector<Flow> spawn_flows(int n_connections, int nodes, const TrafficConfig& cfg,
                              double duration, uint64_t seed);

enum class DropCause {
    no_route,
    send_buffer_overflow,
    send_buffer_timeout,
    mac_queue_overflow,
    retry_exhausted,
    salvage_limit,
    ttl_expired,
    discovery_failed,
};
constexpr int kDropCauseCount = 8;

const char* to_string(DropCause cause);

struct MetricsReport {
    double throughput_kbps = 0.0;
    double e2ed_s = 0.0;  // NaN when degenerate
    double nrl = 0.0;     // +inf when degenerate
    bool degenerate = false;

    long sent = 0;
    long delivered = 0;
    long duplicate_deliveries = 0;
    long in_flight = 0;
    std::array<long, kDropCauseCount> drops{};
    std::array<long, kFrameKindCount> tx_by_kind{};  // per-hop transmissions

    long drops_total() const;
    long control_tx_total() const;  // everything except data
};

// Per-run accumulators. Owned by a single-threaded run; the report is a pure
// function of what was recorded.
class MetricsCollector {
public:
    void record_send(long packet_id, double t);
    // First arrival counts; duplicates are tallied separately. A delivery
    // without a matching send record is a logic error.
    void record_delivery(long packet_id, double t);
    void count_drop(DropCause cause) { ++drops_[static_cast<int>(cause)]; }
    void count_tx(FrameKind kind) { ++tx_[static_cast<int>(kind)]; }

    bool is_delivered(long packet_id) const { return delivered_.count(packet_id) > 0; }
    long sent() const { return static_cast<long>(send_time_.size()); }
    long delivered() const { return static_cast<long>(delivered_.size()); }
    long tx_count(FrameKind kind) const { return tx_[static_cast<int>(kind)]; }

    MetricsReport compute(double duration, int packet_size) const;

private:
    std::map<long, double> send_time_;
    std::set<long> delivered_;
    long duplicates_ = 0;
    double e2ed_sum_ = 0.0;
    std::array<long, kDropCauseCount> drops_{};
    std::array<long, kFrameKindCount> tx_{};
};

}  // namespace vanetlab

#endif
