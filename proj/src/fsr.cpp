#include "vanetlab/fsr.hpp"

#include <algorithm>
#include <deque>

#include "vanetlab/rng.hpp"

namespace vanetlab {

namespace {

int update_size(const FsrPayload& p) {
    int bytes = 16;
    for (const auto& e : p.entries) bytes += 8 + 4 * static_cast<int>(e.neighbors.size());
    return bytes;
}

constexpr int kDataHeader = 12;

}  // namespace

FsrNode::FsrNode(NodeApi& api, const ProtocolParams& params)
    : api_(api),
      p_(params.fsr),
      jitter_(params.timer_jitter),
      fw_jitter_(params.forward_jitter),
      data_ttl_(params.data_ttl) {}

void FsrNode::start() {
    api_.schedule(jittered(p_.intra_interval, jitter_, api_.jitter_rng()), EventKind::protocol_timer,
                  [this] { fire(true); });
    api_.schedule(jittered(p_.inter_interval, jitter_, api_.jitter_rng()), EventKind::protocol_timer,
                  [this] { fire(false); });
}

std::vector<int> FsrNode::fresh_neighbors() const {
    double cutoff = api_.now() - p_.neighbor_timeout_factor * p_.intra_interval;
    std::vector<int> out;
    for (const auto& [id, heard] : neighbor_heard_)
        if (heard >= cutoff) out.push_back(id);
    return out;
}

void FsrNode::fire(bool intra) {
    ++fired_;
    int self = api_.self();
    table_[self] = LsEntry{++own_seqno_, fresh_neighbors(), api_.now()};
    routes_dirty_ = true;
    recompute_routes();

    int radius = intra ? p_.intra_radius : p_.inter_radius;
    auto payload = std::make_shared<FsrPayload>();
    for (const auto& [origin, entry] : table_) {
        int dist = origin == self ? 0 : (hop_dist_.count(origin) ? hop_dist_[origin] : -1);
        if (intra && (dist < 0 || dist > p_.intra_radius)) continue;
        payload->entries.push_back(FsrLinkState{origin, entry.seqno, entry.neighbors});
    }

    Frame f;
    f.kind = FrameKind::fsr_update;
    f.src = self;
    f.dst = kBroadcast;
    f.size = update_size(*payload);
    f.ttl = radius;
    f.born_at = api_.now();
    f.seqno = flood_seq_++;
    f.fsr = std::move(payload);
    api_.mac_send(std::move(f), kBroadcast, {});

    double interval = intra ? p_.intra_interval : p_.inter_interval;
    api_.schedule(jittered(interval, jitter_, api_.jitter_rng()), EventKind::protocol_timer,
                  [this, intra] { fire(intra); });
}

void FsrNode::handle_frame(const Frame& frame) {
    int self = api_.self();
    if (frame.kind == FrameKind::fsr_update) {
        neighbor_heard_[frame.tx_node] = api_.now();
        if (frame.src == self) return;
        auto key = std::make_pair(frame.src, frame.seqno);
        if (seen_floods_.count(key)) return;
        seen_floods_[key] = api_.now();
        if (seen_floods_.size() > 4096)
            seen_floods_.erase(seen_floods_.begin());

        for (const auto& e : frame.fsr->entries) {
            if (e.origin == self) continue;
            auto it = table_.find(e.origin);
            if (it == table_.end() || e.seqno > it->second.seqno) {
                table_[e.origin] = LsEntry{e.seqno, e.neighbors, api_.now()};
                routes_dirty_ = true;
            } else if (e.seqno == it->second.seqno) {
                it->second.heard_at = api_.now();
            }
        }

        if (frame.ttl - 1 >= 1) {
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
        // Only the addressed next hop acts on a unicast data frame.
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

void FsrNode::send_data(int dst, int payload_bytes, long packet_id) {
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

void FsrNode::forward_data(Frame frame) {
    recompute_routes();
    auto it = next_hop_.find(frame.dst);
    if (it == next_hop_.end()) {
        api_.count_drop(DropCause::no_route);
        return;
    }
    int next = it->second;
    MacHandlers h;
    h.on_link_failure = [this](const Frame& f, int hop) {
        neighbor_heard_.erase(hop);
        routes_dirty_ = true;
        api_.count_drop(DropCause::retry_exhausted);
        (void)f;
    };
    if (!api_.mac_send(std::move(frame), next, std::move(h)))
        api_.count_drop(DropCause::mac_queue_overflow);
}

void FsrNode::recompute_routes() {
    if (!routes_dirty_) return;
    routes_dirty_ = false;
    next_hop_.clear();
    hop_dist_.clear();

    int self = api_.self();
    double entry_cutoff = api_.now() - p_.entry_timeout_factor * p_.inter_interval;

    // Advertised links treated as bidirectional for path purposes.
    std::map<int, std::set<int>> adj;
    for (int n : fresh_neighbors()) {
        adj[self].insert(n);
        adj[n].insert(self);
    }
    for (const auto& [origin, entry] : table_) {
        if (origin != self && entry.heard_at < entry_cutoff) continue;
        for (int v : entry.neighbors) {
            adj[origin].insert(v);
            adj[v].insert(origin);
        }
    }

    std::deque<int> queue{self};
    hop_dist_[self] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : adj[u]) {
            if (hop_dist_.count(v)) continue;
            hop_dist_[v] = hop_dist_[u] + 1;
            next_hop_[v] = u == self ? v : next_hop_[u];
            queue.push_back(v);
        }
    }
    next_hop_.erase(self);
}

std::map<int, int> FsrNode::routing_table() {
    recompute_routes();
    return next_hop_;
}

}  // namespace vanetlab
