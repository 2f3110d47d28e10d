#ifndef VANETLAB_FSR_HPP
#define VANETLAB_FSR_HPP

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "vanetlab/protocol.hpp"

namespace vanetlab {

// Fisheye state routing with two scopes: a small radius refreshed often and
// a network-wide radius refreshed slowly. Entries carry per-origin sequence
// numbers; scoped floods re-broadcast unseen update frames while TTL lasts.
class FsrNode : public RoutingProtocol {
public:
    FsrNode(NodeApi& api, const ProtocolParams& params);

    void start() override;
    void handle_frame(const Frame& frame) override;
    void send_data(int dst, int payload_bytes, long packet_id) override;

    long periodic_updates() const override { return fired_; }
    // Routing table view for tests: dst -> next hop.
    std::map<int, int> routing_table();
    int table_entries() const { return static_cast<int>(table_.size()); }

private:
    struct LsEntry {
        int seqno;
        std::vector<int> neighbors;
        double heard_at;
    };

    void fire(bool intra);
    void recompute_routes();
    std::vector<int> fresh_neighbors() const;
    void forward_data(Frame frame);

    NodeApi& api_;
    FsrParams p_;
    bool jitter_;
    double fw_jitter_;
    int data_ttl_;

    std::map<int, LsEntry> table_;          // per-origin link state
    std::map<int, double> neighbor_heard_;  // direct neighbors, last heard
    std::map<std::pair<int, long>, double> seen_floods_;
    std::map<int, int> next_hop_;
    std::map<int, int> hop_dist_;
    bool routes_dirty_ = true;
    int own_seqno_ = 0;
    long flood_seq_ = 0;
    long fired_ = 0;
};

}  // namespace vanetlab

#endif
