#include "vanetlab/olsr.hpp"

#include <algorithm>
#include <deque>

#include "vanetlab/rng.hpp"

namespace vanetlab {

namespace {

int hello_size(const HelloPayload& p) { return 16 + 5 * static_cast<int>(p.neighbors.size()); }
int tc_size(const TcPayload& p) { return 16 + 4 * static_cast<int>(p.selectors.size()); }
constexpr int kDataHeader = 12;

}  // namespace

OlsrNode::OlsrNode(NodeApi& api, const ProtocolParams& params)
    : api_(api),
      p_(params.olsr),
      jitter_(params.timer_jitter),
      fw_jitter_(params.forward_jitter),
      data_ttl_(params.data_ttl) {}

void OlsrNode::start() {
    api_.schedule(jittered(p_.hello_interval, jitter_, api_.jitter_rng()),
                  EventKind::protocol_timer, [this] { hello_fire(); });
    api_.schedule(jittered(p_.tc_interval, jitter_, api_.jitter_rng()), EventKind::protocol_timer,
                  [this] { tc_fire(); });
}

std::set<int> OlsrNode::fresh_neighbor_ids() const {
    std::set<int> out;
    for (const auto& [id, info] : nbrs_) {
        (void)info;
        out.insert(id);
    }
    return out;
}

void OlsrNode::expire_neighbors() {
    double cutoff = api_.now() - p_.neighbor_hold_factor * p_.hello_interval;
    bool changed = false;
    for (auto it = nbrs_.begin(); it != nbrs_.end();) {
        if (it->second.heard_at < cutoff) {
            it = nbrs_.erase(it);
            changed = true;
        } else {
            ++it;
        }
    }
    bool selector_changed = false;
    for (auto it = selectors_.begin(); it != selectors_.end();) {
        if (it->second < cutoff || !nbrs_.count(it->first)) {
            it = selectors_.erase(it);
            selector_changed = true;
        } else {
            ++it;
        }
    }
    if (changed) {
        routes_dirty_ = true;
        select_mprs();
    }
    if (selector_changed) maybe_trigger_tc();
}

void OlsrNode::hello_fire() {
    ++hellos_;
    expire_neighbors();

    auto payload = std::make_shared<HelloPayload>();
    for (const auto& [id, info] : nbrs_) {
        (void)info;
        payload->neighbors.emplace_back(id, mpr_set_.count(id) > 0);
    }
    Frame f;
    f.kind = FrameKind::hello;
    f.src = api_.self();
    f.dst = kBroadcast;
    f.size = hello_size(*payload);
    f.ttl = 1;
    f.born_at = api_.now();
    f.seqno = hellos_;
    f.hello = std::move(payload);
    api_.mac_send(std::move(f), kBroadcast, {});

    api_.schedule(jittered(p_.hello_interval, jitter_, api_.jitter_rng()),
                  EventKind::protocol_timer, [this] { hello_fire(); });
}

void OlsrNode::tc_fire() {
    if (!selectors_.empty()) emit_tc(false);
    api_.schedule(jittered(p_.tc_interval, jitter_, api_.jitter_rng()), EventKind::protocol_timer,
                  [this] { tc_fire(); });
}

void OlsrNode::emit_tc(bool triggered) {
    if (triggered)
        ++triggered_tc_;
    else
        ++periodic_tc_;
    last_tc_ = api_.now();
    selector_change_pending_ = false;

    auto payload = std::make_shared<TcPayload>();
    payload->ansn = ++own_ansn_;
    for (const auto& [id, heard] : selectors_) {
        (void)heard;
        payload->selectors.push_back(id);
    }
    Frame f;
    f.kind = FrameKind::tc;
    f.src = api_.self();
    f.dst = kBroadcast;
    f.size = tc_size(*payload);
    f.ttl = 255;
    f.born_at = api_.now();
    f.seqno = payload->ansn;
    f.tc = std::move(payload);
    api_.mac_send(std::move(f), kBroadcast, {});
}

void OlsrNode::maybe_trigger_tc() {
    if (!p_.triggered_tc) return;
    selector_change_pending_ = true;
    double since = api_.now() - last_tc_;
    if (since >= p_.triggered_tc_spacing) {
        emit_tc(true);
        return;
    }
    if (tc_retrigger_pending_) return;
    tc_retrigger_pending_ = true;
    api_.schedule(p_.triggered_tc_spacing - since, EventKind::protocol_timer, [this] {
        tc_retrigger_pending_ = false;
        if (selector_change_pending_) emit_tc(true);
    });
}

// Greedy MPR cover: first the sole covers of some strict two-hop neighbor,
// then repeatedly the neighbor covering the most uncovered two-hop nodes,
// ties broken by smaller id.
void OlsrNode::select_mprs() {
    ++selections_;
    int self = api_.self();
    std::set<int> n1 = fresh_neighbor_ids();
    std::map<int, std::set<int>> covers;  // two-hop node -> covering neighbors
    for (const auto& [n, info] : nbrs_) {
        for (int v : info.neighbors) {
            if (v == self || n1.count(v)) continue;
            covers[v].insert(n);
        }
    }

    std::set<int> mpr;
    std::set<int> uncovered;
    for (const auto& [v, cov] : covers) {
        uncovered.insert(v);
        if (cov.size() == 1) mpr.insert(*cov.begin());
    }
    auto mark_covered = [&](int n) {
        for (auto it = uncovered.begin(); it != uncovered.end();) {
            if (covers[*it].count(n))
                it = uncovered.erase(it);
            else
                ++it;
        }
    };
    for (int n : mpr) mark_covered(n);

    while (!uncovered.empty()) {
        int best = -1;
        size_t best_gain = 0;
        for (int n : n1) {
            if (mpr.count(n)) continue;
            size_t gain = 0;
            for (int v : uncovered)
                if (covers[v].count(n)) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = n;
            }
        }
        if (best < 0) break;  //残 uncoverable two-hop nodes (stale info)
        mpr.insert(best);
        mark_covered(best);
    }

    for (const auto& [v, cov] : covers) {
        bool ok = false;
        for (int n : cov)
            if (mpr.count(n)) ok = true;
        bool coverable = !cov.empty();
        if (coverable && !ok) ++coverage_violations_;
    }

    mpr_set_ = std::move(mpr);
}

void OlsrNode::handle_frame(const Frame& frame) {
    int self = api_.self();
    if (frame.kind == FrameKind::hello) {
        int sender = frame.tx_node;
        std::set<int> advertised;
        bool lists_me_as_mpr = false;
        bool lists_me = false;
        for (const auto& [id, is_mpr] : frame.hello->neighbors) {
            advertised.insert(id);
            if (id == self) {
                lists_me = true;
                lists_me_as_mpr = is_mpr;
            }
        }
        nbrs_[sender] = NbrInfo{std::move(advertised), api_.now()};
        routes_dirty_ = true;

        bool selector_changed = false;
        if (lists_me && lists_me_as_mpr) {
            selector_changed = selectors_.find(sender) == selectors_.end();
            selectors_[sender] = api_.now();
        } else if (selectors_.erase(sender) > 0) {
            selector_changed = true;
        }
        select_mprs();
        if (selector_changed) maybe_trigger_tc();
        return;
    }

    if (frame.kind == FrameKind::tc) {
        if (frame.src == self) return;
        const TcPayload& tc = *frame.tc;
        auto it = topo_.find(frame.src);
        if (it == topo_.end() || tc.ansn > it->second.ansn) {
            topo_[frame.src] = TopoEntry{tc.ansn,
                                         std::set<int>(tc.selectors.begin(), tc.selectors.end()),
                                         api_.now()};
            routes_dirty_ = true;
        } else if (tc.ansn == it->second.ansn) {
            it->second.heard_at = api_.now();
        }

        // Forward only if the transmitter chose us as MPR, once per (origin, ansn).
        bool am_mpr_of_tx = selectors_.count(frame.tx_node) > 0;
        auto key = std::make_pair(frame.src, tc.ansn);
        if (am_mpr_of_tx && frame.ttl - 1 >= 1 && forwarded_tc_.insert(key).second) {
            if (forwarded_tc_.size() > 8192) forwarded_tc_.erase(forwarded_tc_.begin());
            Frame fwd = frame;
            fwd.ttl -= 1;
            fwd.hops += 1;
            double delay = fw_jitter_ > 0.0 ? uniform(api_.jitter_rng(), 0.0, fw_jitter_) : 0.0;
            api_.schedule(delay, EventKind::protocol_timer,
                          [this, fwd = std::move(fwd)]() mutable {
                              api_.mac_send(std::move(fwd), kBroadcast, {});
                          });
        }
        return;
    }

    if (frame.kind == FrameKind::data && frame.mac_dst == self) {
        if (frame.dst == self) {
            api_.deliver_data(frame);
            return;
        }
        Frame f = frame;
        if (f.ttl <= 1) {
            api_.count_drop(DropCause::ttl_expired);
            return;
        }
        f.ttl -= 1;
        f.hops += 1;
        forward_data(std::move(f));
    }
}

void OlsrNode::send_data(int dst, int payload_bytes, long packet_id) {
    Frame f;
    f.kind = FrameKind::data;
    f.src = api_.self();
    f.dst = dst;
    f.size = payload_bytes + kDataHeader;
    f.ttl = data_ttl_;
    f.born_at = api_.now();
    f.seqno = packet_id;
    forward_data(std::move(f));
}

void OlsrNode::forward_data(Frame frame) {
    recompute_routes();
    auto it = next_hop_.find(frame.dst);
    if (it == next_hop_.end()) {
        api_.count_drop(DropCause::no_route);
        return;
    }
    int next = it->second;
    MacHandlers h;
    h.on_link_failure = [this](const Frame& f, int hop) {
        (void)f;
        if (nbrs_.erase(hop) > 0) {
            routes_dirty_ = true;
            select_mprs();
        }
        api_.count_drop(DropCause::retry_exhausted);
    };
    if (!api_.mac_send(std::move(frame), next, std::move(h)))
        api_.count_drop(DropCause::mac_queue_overflow);
}

void OlsrNode::recompute_routes() {
    if (!routes_dirty_) return;
    routes_dirty_ = false;
    next_hop_.clear();

    int self = api_.self();
    double topo_cutoff = api_.now() - p_.topology_hold_factor * p_.tc_interval;
    std::map<int, std::set<int>> adj;
    for (const auto& [n, info] : nbrs_) {
        (void)info;
        adj[self].insert(n);
        adj[n].insert(self);
    }
    for (const auto& [origin, entry] : topo_) {
        if (entry.heard_at < topo_cutoff) continue;
        for (int s : entry.selectors) {
            adj[origin].insert(s);
            adj[s].insert(origin);
        }
    }

    std::map<int, int> dist;
    std::deque<int> queue{self};
    dist[self] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : adj[u]) {
            if (dist.count(v)) continue;
            dist[v] = dist[u] + 1;
            next_hop_[v] = u == self ? v : next_hop_[u];
            queue.push_back(v);
        }
    }
    next_hop_.erase(self);
}

std::set<int> OlsrNode::selector_set() const {
    std::set<int> out;
    for (const auto& [id, t] : selectors_) {
        (void)t;
        out.insert(id);
    }
    return out;
}

std::map<int, int> OlsrNode::routing_table() {
    recompute_routes();
    return next_hop_;
}

}  // namespace vanetlab
