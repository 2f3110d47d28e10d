#include "vanetlab/dsr.hpp"

#include <algorithm>

#include "vanetlab/rng.hpp"

namespace vanetlab {

namespace {

bool has_repeats(const std::vector<int>& path) {
    std::set<int> seen(path.begin(), path.end());
    return seen.size() != path.size();
}

int rreq_size(const RreqPayload& p) { return 16 + 4 * static_cast<int>(p.route.size()); }
int rrep_size(const RrepPayload& p) { return 16 + 4 * static_cast<int>(p.route.size()); }
constexpr int kRerrSize = 20;
int data_size(int payload, const std::vector<int>& route) {
    return payload + 12 + 4 * static_cast<int>(route.size());
}

}  // namespace

DsrRouteCache::DsrRouteCache(int capacity) : capacity_(capacity) {}

bool DsrRouteCache::insert(const std::vector<int>& path, double now) {
    if (path.size() < 2 || has_repeats(path)) return false;
    for (const Entry& e : entries_)
        if (e.path == path) return false;
    if (static_cast<int>(entries_.size()) >= capacity_) entries_.pop_front();
    entries_.push_back(Entry{path, now});
    return true;
}

std::optional<std::vector<int>> DsrRouteCache::find(int dst) const {
    const std::vector<int>* best = nullptr;
    size_t best_len = 0;
    for (const Entry& e : entries_) {
        auto it = std::find(e.path.begin(), e.path.end(), dst);
        if (it == e.path.end()) continue;
        size_t len = static_cast<size_t>(it - e.path.begin()) + 1;
        if (len < 2) continue;  // dst == self
        if (!best || len < best_len) {
            best = &e.path;
            best_len = len;
        }
    }
    if (!best) return std::nullopt;
    return std::vector<int>(best->begin(), best->begin() + best_len);
}

void DsrRouteCache::purge_link(int u, int v) {
    auto uses_link = [u, v](const Entry& e) {
        for (size_t i = 0; i + 1 < e.path.size(); ++i) {
            int a = e.path[i], b = e.path[i + 1];
            if ((a == u && b == v) || (a == v && b == u)) return true;
        }
        return false;
    };
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(), uses_link), entries_.end());
}

bool DsrRouteCache::contains_link(int u, int v) const {
    for (const Entry& e : entries_)
        for (size_t i = 0; i + 1 < e.path.size(); ++i) {
            int a = e.path[i], b = e.path[i + 1];
            if ((a == u && b == v) || (a == v && b == u)) return true;
        }
    return false;
}

DsrNode::DsrNode(NodeApi& api, const ProtocolParams& params)
    : api_(api),
      p_(params.dsr),
      jitter_(params.timer_jitter),
      fw_jitter_(params.forward_jitter),
      data_ttl_(params.data_ttl),
      cache_(params.dsr.cache_capacity) {}

double DsrNode::forward_delay() {
    return fw_jitter_ > 0.0 ? uniform(api_.jitter_rng(), 0.0, fw_jitter_) : 0.0;
}

void DsrNode::start() {
    api_.schedule(1.0, EventKind::protocol_timer, [this] { sweep_buffer(); });
}

void DsrNode::sweep_buffer() {
    double now = api_.now();
    while (!send_buffer_.empty() && now - send_buffer_.front().queued_at > p_.send_buffer_timeout) {
        api_.count_drop(DropCause::send_buffer_timeout);
        send_buffer_.pop_front();
    }
    api_.schedule(1.0, EventKind::protocol_timer, [this] { sweep_buffer(); });
}

void DsrNode::send_data(int dst, int payload_bytes, long packet_id) {
    auto route = cache_.find(dst);
    if (route) {
        send_along_route(*route, payload_bytes, packet_id, 0, api_.now());
        return;
    }
    if (static_cast<int>(send_buffer_.size()) >= p_.send_buffer_size) {
        api_.count_drop(DropCause::send_buffer_overflow);
        send_buffer_.pop_front();
    }
    send_buffer_.push_back(Buffered{dst, payload_bytes, packet_id, api_.now()});
    start_discovery(dst);
}

void DsrNode::send_along_route(const std::vector<int>& route, int payload_bytes, long packet_id,
                               int salvage_count, double born_at) {
    Frame f;
    f.kind = FrameKind::data;
    f.src = route.front();
    f.dst = route.back();
    f.size = data_size(payload_bytes, route);
    f.ttl = data_ttl_;
    f.born_at = born_at;
    f.seqno = packet_id;
    f.salvage_count = salvage_count;
    f.route = route;
    f.route_idx = 0;
    int next = route[1];
    MacHandlers h;
    h.on_link_failure = [this](const Frame& frame, int hop) {
        handle_data_link_failure(frame, hop);
    };
    if (!api_.mac_send(std::move(f), next, std::move(h)))
        api_.count_drop(DropCause::mac_queue_overflow);
}

void DsrNode::start_discovery(int dst) {
    if (discoveries_.count(dst)) return;
    Discovery d;
    d.generation = ++generation_counter_;
    discoveries_[dst] = d;
    send_ring(dst);
}

void DsrNode::send_ring(int dst) {
    Discovery& d = discoveries_.at(dst);
    int ttl = d.ring_idx == 0 ? p_.non_propagating_ttl : 255;

    auto payload = std::make_shared<RreqPayload>();
    payload->target = dst;
    payload->request_id = next_rreq_id_++;
    payload->route = {api_.self()};
    payload->broken_link = pending_broken_link_;
    pending_broken_link_.reset();

    Frame f;
    f.kind = FrameKind::rreq;
    f.src = api_.self();
    f.dst = kBroadcast;
    f.size = rreq_size(*payload);
    f.ttl = ttl;
    f.born_at = api_.now();
    f.seqno = payload->request_id;
    f.rreq = std::move(payload);
    ++rreq_originated_;
    api_.mac_send(std::move(f), kBroadcast, {});

    double timeout = (d.ring_idx == 0 ? p_.ring_timeout : p_.flood_timeout);
    timeout *= static_cast<double>(1 << d.attempts);  // exponential backoff per retry
    long gen = d.generation;
    api_.schedule(timeout, EventKind::protocol_timer,
                  [this, dst, gen] { on_discovery_timeout(dst, gen); });
}

void DsrNode::on_discovery_timeout(int dst, long generation) {
    auto it = discoveries_.find(dst);
    if (it == discoveries_.end() || it->second.generation != generation) return;  // stale
    Discovery& d = it->second;
    if (d.ring_idx == 0) {
        d.ring_idx = 1;  // escalate to the network-wide ring
        send_ring(dst);
        return;
    }
    ++d.attempts;
    if (d.attempts > p_.max_discovery_retries) {
        discovery_failed(dst);
        return;
    }
    d.ring_idx = 0;
    send_ring(dst);
}

void DsrNode::discovery_failed(int dst) {
    discoveries_.erase(dst);
    size_t kept = 0;
    for (size_t i = 0; i < send_buffer_.size(); ++i) {
        if (send_buffer_[i].dst == dst) {
            api_.count_drop(DropCause::discovery_failed);
        } else {
            send_buffer_[kept++] = send_buffer_[i];
        }
    }
    send_buffer_.resize(kept);
}

void DsrNode::route_found(int dst) {
    discoveries_.erase(dst);
    flush_buffer(dst);
}

void DsrNode::flush_buffer(int dst) {
    auto route = cache_.find(dst);
    if (!route) return;
    size_t kept = 0;
    std::vector<Buffered> to_send;
    for (size_t i = 0; i < send_buffer_.size(); ++i) {
        if (send_buffer_[i].dst == dst)
            to_send.push_back(send_buffer_[i]);
        else
            send_buffer_[kept++] = send_buffer_[i];
    }
    send_buffer_.resize(kept);
    for (const Buffered& b : to_send)
        send_along_route(*route, b.size, b.packet_id, 0, b.queued_at);
}

void DsrNode::handle_frame(const Frame& frame) {
    harvest_routes(frame);

    bool addressed = frame.route_idx + 1 < static_cast<int>(frame.route.size()) &&
                     frame.route[frame.route_idx + 1] == api_.self();
    switch (frame.kind) {
        case FrameKind::rreq:
            handle_rreq(frame);
            break;
        case FrameKind::rrep:
            if (addressed) handle_rrep(frame);
            break;
        case FrameKind::rerr:
            if (addressed) handle_rerr(frame);
            break;
        case FrameKind::data:
            if (addressed) {
                Frame f = frame;
                f.route_idx += 1;
                forward_data(std::move(f));
            }
            break;
        default:
            break;
    }
}

// Promiscuous route harvesting: any observed source route anchored at this
// node yields a forward suffix and a reversed prefix; an RREQ's accumulated
// route reversed through its transmitter anchors here as well.
void DsrNode::harvest_routes(const Frame& frame) {
    int self = api_.self();
    if (frame.kind == FrameKind::rreq && frame.rreq) {
        const auto& acc = frame.rreq->route;
        if (std::find(acc.begin(), acc.end(), self) == acc.end()) {
            std::vector<int> path{self};
            path.insert(path.end(), acc.rbegin(), acc.rend());
            insert_observed_path(path);
        }
        if (frame.rreq->broken_link)
            cache_.purge_link(frame.rreq->broken_link->first, frame.rreq->broken_link->second);
        return;
    }

    const std::vector<int>* observed = nullptr;
    if (frame.kind == FrameKind::rrep && frame.rrep) observed = &frame.rrep->route;
    else if (frame.kind == FrameKind::data) observed = &frame.route;
    if (!observed) return;
    auto it = std::find(observed->begin(), observed->end(), self);
    if (it == observed->end()) return;
    insert_observed_path(std::vector<int>(it, observed->end()));
    insert_observed_path(std::vector<int>(std::make_reverse_iterator(it + 1), observed->rend()));
}

bool DsrNode::insert_observed_path(const std::vector<int>& path) {
    bool inserted = cache_.insert(path, api_.now());
    if (inserted) {
        // A fresh route may satisfy a pending discovery.
        for (auto it = discoveries_.begin(); it != discoveries_.end();) {
            int dst = it->first;
            ++it;
            if (cache_.find(dst)) route_found(dst);
        }
    }
    return inserted;
}

void DsrNode::handle_rreq(const Frame& frame) {
    const RreqPayload& req = *frame.rreq;
    int self = api_.self();
    if (frame.src == self) return;
    auto& seen = seen_rreqs_[frame.src];
    if (!seen.insert(req.request_id).second) return;
    if (seen.size() > 256) seen.erase(seen.begin());

    if (std::find(req.route.begin(), req.route.end(), self) != req.route.end()) return;

    if (req.target == self) {
        std::vector<int> full = req.route;
        full.push_back(self);
        std::vector<int> travel(full.rbegin(), full.rend());
        send_rrep(full, travel);
        return;
    }

    if (p_.gratuitous_rreps) {
        if (auto cached = cache_.find(req.target)) {
            std::vector<int> full = req.route;  // originator .. previous hop
            full.insert(full.end(), cached->begin(), cached->end());  // self .. target
            if (!has_repeats(full)) {
                std::vector<int> travel{self};
                travel.insert(travel.end(), req.route.rbegin(), req.route.rend());
                send_rrep(full, travel);
                return;
            }
        }
    }

    if (frame.ttl - 1 < 1) return;
    auto payload = std::make_shared<RreqPayload>(req);
    payload->route.push_back(self);
    Frame fwd;
    fwd.kind = FrameKind::rreq;
    fwd.src = frame.src;
    fwd.dst = kBroadcast;
    fwd.size = rreq_size(*payload);
    fwd.ttl = frame.ttl - 1;
    fwd.born_at = frame.born_at;
    fwd.seqno = frame.seqno;
    fwd.hops = frame.hops + 1;
    fwd.rreq = std::move(payload);
    api_.schedule(forward_delay(), EventKind::protocol_timer,
                  [this, fwd = std::move(fwd)]() mutable { api_.mac_send(std::move(fwd), kBroadcast, {}); });
}

// full_route: originator..target (the route being reported).
// travel: responder..originator (the unicast path the RREP follows).
void DsrNode::send_rrep(const std::vector<int>& full_route, const std::vector<int>& travel) {
    auto payload = std::make_shared<RrepPayload>();
    payload->route = full_route;
    Frame f;
    f.kind = FrameKind::rrep;
    f.src = api_.self();
    f.dst = travel.back();
    f.size = rrep_size(*payload);
    f.ttl = static_cast<int>(travel.size());
    f.born_at = api_.now();
    f.seqno = next_rreq_id_++;
    f.route = travel;
    f.route_idx = 0;
    f.rrep = std::move(payload);
    forward_along(std::move(f));
}

void DsrNode::handle_rrep(const Frame& frame) {
    Frame f = frame;
    f.route_idx += 1;
    if (f.route_idx == static_cast<int>(f.route.size()) - 1) {
        // Back at the originator; harvest already cached the route, so just
        // resolve any pending discovery that it satisfied.
        for (auto it = discoveries_.begin(); it != discoveries_.end();) {
            int dst = it->first;
            ++it;
            if (cache_.find(dst)) route_found(dst);
        }
        return;
    }
    forward_along(std::move(f));
}

void DsrNode::handle_rerr(const Frame& frame) {
    cache_.purge_link(frame.rerr->from, frame.rerr->to);
    Frame f = frame;
    f.route_idx += 1;
    if (f.route_idx == static_cast<int>(f.route.size()) - 1) {
        // Reached the source: remember the link for the next RREQ.
        pending_broken_link_ = {frame.rerr->from, frame.rerr->to};
        return;
    }
    forward_along(std::move(f));
}

void DsrNode::forward_along(Frame frame) {
    if (frame.route_idx + 1 >= static_cast<int>(frame.route.size())) return;
    if (frame.ttl - 1 < 0) return;
    frame.ttl -= 1;
    frame.hops += 1;
    int next = frame.route[frame.route_idx + 1];
    api_.mac_send(std::move(frame), next, {});  // control frames are not salvaged
}

void DsrNode::forward_data(Frame frame) {
    int self = api_.self();
    if (frame.route[frame.route_idx] != self) return;
    if (frame.route_idx == static_cast<int>(frame.route.size()) - 1) {
        api_.deliver_data(frame);
        return;
    }
    if (frame.ttl - 1 < 1) {
        api_.count_drop(DropCause::ttl_expired);
        return;
    }
    frame.ttl -= 1;
    frame.hops += 1;
    int next = frame.route[frame.route_idx + 1];
    MacHandlers h;
    h.on_link_failure = [this](const Frame& f, int hop) { handle_data_link_failure(f, hop); };
    if (!api_.mac_send(std::move(frame), next, std::move(h)))
        api_.count_drop(DropCause::mac_queue_overflow);
}

void DsrNode::handle_data_link_failure(Frame frame, int next_hop) {
    if (frame.maint_rexmt < p_.max_maint_rexmt) {
        frame.maint_rexmt += 1;
        MacHandlers h;
        h.on_link_failure = [this](const Frame& f, int hop) { handle_data_link_failure(f, hop); };
        if (!api_.mac_send(std::move(frame), next_hop, std::move(h)))
            api_.count_drop(DropCause::mac_queue_overflow);
        return;
    }
    salvage_or_report(std::move(frame), api_.self(), next_hop);
}

void DsrNode::salvage_or_report(Frame frame, int broken_from, int broken_to) {
    cache_.purge_link(broken_from, broken_to);
    int dst = frame.route.back();

    if (frame.salvage_count >= p_.salvage_limit) {
        send_rerr(frame, broken_from, broken_to);
        api_.count_drop(DropCause::salvage_limit);
        return;
    }
    auto alt = cache_.find(dst);
    if (alt) {
        api_.trace("salvage dst=" + std::to_string(dst));
        Frame f;
        f.kind = FrameKind::data;
        f.src = frame.src;
        f.dst = dst;
        f.size = data_size(frame.size - 12 - 4 * static_cast<int>(frame.route.size()), *alt);
        f.ttl = frame.ttl;
        f.born_at = frame.born_at;
        f.seqno = frame.seqno;
        f.salvage_count = frame.salvage_count + 1;
        f.route = *alt;
        f.route_idx = 0;
        MacHandlers h;
        h.on_link_failure = [this](const Frame& fr, int hop) { handle_data_link_failure(fr, hop); };
        if (!api_.mac_send(std::move(f), (*alt)[1], std::move(h)))
            api_.count_drop(DropCause::mac_queue_overflow);
        return;
    }
    send_rerr(frame, broken_from, broken_to);
    api_.count_drop(DropCause::retry_exhausted);
}

void DsrNode::send_rerr(const Frame& frame, int broken_from, int broken_to) {
    int self = api_.self();
    if (frame.src == self) {
        // Local failure at the source: purge and let the next demand re-discover.
        pending_broken_link_ = {broken_from, broken_to};
        return;
    }
    auto self_pos = std::find(frame.route.begin(), frame.route.end(), self);
    if (self_pos == frame.route.end()) return;
    std::vector<int> travel(std::make_reverse_iterator(self_pos + 1), frame.route.rend());
    if (travel.size() < 2) return;

    auto payload = std::make_shared<RerrPayload>();
    payload->from = broken_from;
    payload->to = broken_to;
    Frame f;
    f.kind = FrameKind::rerr;
    f.src = self;
    f.dst = travel.back();
    f.size = kRerrSize;
    f.ttl = static_cast<int>(travel.size());
    f.born_at = api_.now();
    f.seqno = next_rreq_id_++;
    f.route = travel;
    f.route_idx = 0;
    f.rerr = std::move(payload);
    forward_along(std::move(f));
}

}  // namespace vanetlab
