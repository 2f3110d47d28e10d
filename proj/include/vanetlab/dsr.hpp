#ifndef VANETLAB_DSR_HPP
#define VANETLAB_DSR_HPP

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "vanetlab/protocol.hpp"

namespace vanetlab {

// Bounded FIFO path cache. Every stored path starts at the owning node and
// is loop-free; eviction only happens at capacity, so capacity doubles as
// the staleness knob.
class DsrRouteCache {
public:
    explicit DsrRouteCache(int capacity);

    // path[0] must be the owner. Rejects loops and trivial paths; identical
    // paths refresh nothing (FIFO position is kept).
    bool insert(const std::vector<int>& path, double now);
    // Shortest stored route to dst (a prefix of a stored path).
    std::optional<std::vector<int>> find(int dst) const;
    void purge_link(int u, int v);

    int size() const { return static_cast<int>(entries_.size()); }
    int capacity() const { return capacity_; }
    bool contains_link(int u, int v) const;

private:
    struct Entry {
        std::vector<int> path;
        double inserted_at;
    };
    std::deque<Entry> entries_;
    int capacity_;
};

class DsrNode : public RoutingProtocol {
public:
    DsrNode(NodeApi& api, const ProtocolParams& params);

    void start() override;
    void handle_frame(const Frame& frame) override;
    void send_data(int dst, int payload_bytes, long packet_id) override;

    const DsrRouteCache& cache() const { return cache_; }
    int buffered() const { return static_cast<int>(send_buffer_.size()); }
    long rreq_originated() const { return rreq_originated_; }

private:
    struct Discovery {
        int ring_idx = 0;
        int attempts = 0;
        long generation = 0;
    };
    struct Buffered {
        int dst;
        int size;
        long packet_id;
        double queued_at;
    };

    void start_discovery(int dst);
    void send_ring(int dst);
    void on_discovery_timeout(int dst, long generation);
    void discovery_failed(int dst);
    void route_found(int dst);
    void flush_buffer(int dst);
    void sweep_buffer();

    void send_along_route(const std::vector<int>& route, int payload_bytes, long packet_id,
                          int salvage_count, double born_at);
    void forward_data(Frame frame);
    void handle_data_link_failure(Frame frame, int next_hop);
    void salvage_or_report(Frame frame, int broken_from, int broken_to);
    void send_rerr(const Frame& frame, int broken_from, int broken_to);

    void handle_rreq(const Frame& frame);
    void handle_rrep(const Frame& frame);
    void handle_rerr(const Frame& frame);
    void send_rrep(const std::vector<int>& full_route, const std::vector<int>& travel);
    void forward_along(Frame frame);  // unicast route-carried control frames

    void harvest_routes(const Frame& frame);
    bool insert_observed_path(const std::vector<int>& path);
    double forward_delay();

    NodeApi& api_;
    DsrParams p_;
    bool jitter_;
    double fw_jitter_;
    int data_ttl_;

    DsrRouteCache cache_;
    std::deque<Buffered> send_buffer_;
    std::map<int, Discovery> discoveries_;
    std::map<int, std::set<long>> seen_rreqs_;
    std::optional<std::pair<int, int>> pending_broken_link_;  // piggy-backed on next RREQ
    long next_rreq_id_ = 0;
    long generation_counter_ = 0;
    long rreq_originated_ = 0;
};

}  // namespace vanetlab

#endif
