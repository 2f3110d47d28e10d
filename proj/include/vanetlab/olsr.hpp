#ifndef VANETLAB_OLSR_HPP
#define VANETLAB_OLSR_HPP

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "vanetlab/protocol.hpp"

namespace vanetlab {

// OLSR with periodic HELLO/TC, greedy MPR cover selection and MPR-gated TC
// flooding. TC emission is also triggered when the selector set changes.
class OlsrNode : public RoutingProtocol {
public:
    OlsrNode(NodeApi& api, const ProtocolParams& params);

    void start() override;
    void handle_frame(const Frame& frame) override;
    void send_data(int dst, int payload_bytes, long packet_id) override;

    long triggered_updates() const override { return triggered_tc_; }
    long periodic_updates() const override { return periodic_tc_ + hellos_; }
    long coverage_violations() const override { return coverage_violations_; }

    const std::set<int>& mpr_set() const { return mpr_set_; }
    std::set<int> selector_set() const;
    std::map<int, int> routing_table();
    long selections() const { return selections_; }

private:
    struct NbrInfo {
        std::set<int> neighbors;  // as advertised by the neighbor's HELLO
        double heard_at;
    };
    struct TopoEntry {
        int ansn;
        std::set<int> selectors;
        double heard_at;
    };

    void hello_fire();
    void tc_fire();
    void emit_tc(bool triggered);
    void maybe_trigger_tc();
    void expire_neighbors();
    void select_mprs();
    void recompute_routes();
    void forward_data(Frame frame);
    std::set<int> fresh_neighbor_ids() const;

    NodeApi& api_;
    OlsrParams p_;
    bool jitter_;
    double fw_jitter_;
    int data_ttl_;

    std::map<int, NbrInfo> nbrs_;
    std::map<int, double> selectors_;  // nodes that picked us as MPR
    std::set<int> mpr_set_;
    std::map<int, TopoEntry> topo_;
    std::set<std::pair<int, int>> forwarded_tc_;
    std::map<int, int> next_hop_;
    bool routes_dirty_ = true;
    int own_ansn_ = 0;
    double last_tc_ = -1e18;
    bool tc_retrigger_pending_ = false;
    bool selector_change_pending_ = false;

    long hellos_ = 0;
    long periodic_tc_ = 0;
    long triggered_tc_ = 0;
    long selections_ = 0;
    long coverage_violations_ = 0;
};

}  // namespace vanetlab

#endif
