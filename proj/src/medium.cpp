#include "vanetlab/medium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vanetlab/engine.hpp"
#include "vanetlab/rng.hpp"

namespace vanetlab {

void MacConfig::validate() const {
    if (!(tau_slot > 0.0)) throw std::domain_error("MacConfig: tau_slot must be > 0");
    if (difs < 0.0) throw std::domain_error("MacConfig: difs must be >= 0");
    if (!(bitrate > 0.0)) throw std::domain_error("MacConfig: bitrate must be > 0");
    if (!(tx_prob > 0.0) || tx_prob > 1.0) throw std::domain_error("MacConfig: tx_prob outside (0,1]");
    if (retry_limit < 0) throw std::domain_error("MacConfig: retry_limit must be >= 0");
    if (queue_limit < 1) throw std::domain_error("MacConfig: queue_limit must be >= 1");
    if (!(cs_range > 0.0)) throw std::domain_error("MacConfig: cs_range must be > 0");
}

Medium::Medium(Engine& engine, const MacConfig& cfg, int nodes)
    : engine_(engine), cfg_(cfg), nodes_(nodes) {}

double Medium::align_up(double t) const {
    double x = t / cfg_.tau_slot;
    double eps = x * 1e-12 + 1e-12;
    return std::ceil(x - eps) * cfg_.tau_slot;
}

bool Medium::enqueue(int node, Frame frame, int mac_dst, MacHandlers handlers) {
    NodeMac& mac = nodes_[node];
    if (static_cast<int>(mac.queue.size()) >= cfg_.queue_limit) {
        if (frame.kind != FrameKind::data) ++stats_.control_dropped;
        return false;
    }
    mac.queue.push_back(Outgoing{std::move(frame), mac_dst, std::move(handlers), 0});
    ensure_slot(node);
    return true;
}

int Medium::queue_len(int node) const { return static_cast<int>(nodes_[node].queue.size()); }

// Strict start < t: transmissions beginning exactly at t do not block a
// decision made at t, which is what lets aligned contenders collide.
bool Medium::idle(int node, double t) const {
    Vec2 p = engine_.position(node, t);
    for (const auto& rec : records_) {
        if (rec->start < t && t < rec->end + cfg_.difs) {
            if (distance({rec->sender_x, rec->sender_y}, p) <= cfg_.cs_range) return false;
        }
    }
    return true;
}

double Medium::busy_until(int node, double t) const {
    Vec2 p = engine_.position(node, t);
    double until = t;
    for (const auto& rec : records_) {
        if (rec->start < t && t < rec->end + cfg_.difs) {
            if (distance({rec->sender_x, rec->sender_y}, p) <= cfg_.cs_range)
                until = std::max(until, rec->end + cfg_.difs);
        }
    }
    return until;
}

void Medium::ensure_slot(int node) {
    NodeMac& mac = nodes_[node];
    if (mac.slot_scheduled || mac.transmitting || mac.queue.empty()) return;
    double t = align_up(std::max(engine_.now(), busy_until(node, engine_.now())));
    mac.slot_scheduled = true;
    engine_.queue().schedule(t, EventKind::mac_slot, node, [this, node] { on_slot(node); });
}

void Medium::on_slot(int node) {
    NodeMac& mac = nodes_[node];
    mac.slot_scheduled = false;
    if (mac.transmitting || mac.queue.empty()) return;
    double t = engine_.now();
    if (!idle(node, t)) {
        ensure_slot(node);
        return;
    }
    if (bernoulli(engine_.node(node).rng_mac, cfg_.tx_prob)) {
        start_tx(node);
    } else {
        mac.slot_scheduled = true;
        engine_.queue().schedule(t + cfg_.tau_slot, EventKind::mac_slot, node,
                                 [this, node] { on_slot(node); });
    }
}

void Medium::note_busy_period(double start, double end) {
    if (period_tx_ > 0 && start < period_end_) {
        period_end_ = std::max(period_end_, end);
        ++period_tx_;
        return;
    }
    if (period_tx_ == 1) ++stats_.single_tx_periods;
    if (period_tx_ >= 2) ++stats_.multi_tx_periods;
    if (period_tx_ > 0) ++stats_.busy_periods;
    period_start_ = start;
    period_end_ = end;
    period_tx_ = 1;
}

void Medium::finalize() { note_busy_period(period_end_ + 1.0, period_end_ + 1.0); }

void Medium::start_tx(int node) {
    NodeMac& mac = nodes_[node];
    Outgoing& out = mac.queue.front();
    double t = engine_.now();
    double airtime = out.frame.size * 8.0 / cfg_.bitrate;

    auto rec = std::make_shared<TxRecord>();
    rec->sender = node;
    rec->mac_dst = out.mac_dst;
    rec->start = t;
    rec->end = t + airtime;
    rec->frame = out.frame;
    rec->frame.tx_node = node;
    rec->frame.mac_dst = out.mac_dst;
    Vec2 sp = engine_.position(node, t);
    rec->sender_x = sp.x;
    rec->sender_y = sp.y;

    prune(t);
    records_.push_back(rec);
    mac.transmitting = true;
    ++stats_.tx_started;
    note_busy_period(rec->start, rec->end);
    engine_.metrics().count_tx(rec->frame.kind);
    if (engine_.tracing())
        engine_.trace_line(EventKind::mac_slot, node,
                           std::string("tx kind=") + to_string(rec->frame.kind) +
                               " size=" + std::to_string(rec->frame.size) +
                               " seq=" + std::to_string(rec->frame.seqno));

    // Candidate receivers resolve at airtime end; positions and distances
    // are sampled at transmission start.
    double candidate_range =
        cfg_.perfect_reception ? engine_.range(RangeKind::nominal_rx) : cfg_.cs_range;
    for (int r = 0; r < engine_.node_count(); ++r) {
        if (r == node) continue;
        Vec2 rp = engine_.position(r, t);
        double d = distance(sp, rp);
        if (d > candidate_range) continue;
        engine_.queue().schedule(rec->end, EventKind::frame_delivery, r,
                                 [this, rec, r, rp, d] { resolve_delivery(rec, r, rp.x, rp.y, d); });
    }
    engine_.queue().schedule(rec->end, EventKind::mac_slot, node,
                             [this, node, rec] { finish_tx(node, rec); });
}

void Medium::resolve_delivery(const std::shared_ptr<TxRecord>& rec, int receiver, double rx_x,
                              double rx_y, double dist) {
    // Half-duplex: a node transmitting during any part of the airtime hears
    // nothing. Two or more transmissions overlapping at the receiver destroy
    // each other (no capture).
    for (const auto& other : records_) {
        if (other == rec) continue;
        bool overlap = other->start < rec->end && rec->start < other->end;
        if (!overlap) continue;
        if (other->sender == receiver) return;
        if (distance({other->sender_x, other->sender_y}, {rx_x, rx_y}) <= cfg_.cs_range) return;
    }
    if (!cfg_.perfect_reception) {
        double p = engine_.reception_prob(dist);
        if (!bernoulli(engine_.node(receiver).rng_fading, p)) return;
    }
    if (receiver == rec->mac_dst) rec->dst_received = true;
    engine_.frame_received(receiver, rec->frame);
}

void Medium::finish_tx(int node, const std::shared_ptr<TxRecord>& rec) {
    NodeMac& mac = nodes_[node];
    mac.transmitting = false;
    Outgoing out = std::move(mac.queue.front());
    bool unicast = out.mac_dst != kBroadcast;
    if (!unicast || rec->dst_received) {
        mac.queue.pop_front();
        if (out.handlers.on_complete) out.handlers.on_complete(out.frame, rec->dst_received || !unicast);
    } else if (out.retries < cfg_.retry_limit) {
        ++mac.queue.front().retries;
    } else {
        mac.queue.pop_front();
        if (out.handlers.on_link_failure) out.handlers.on_link_failure(out.frame, out.mac_dst);
    }
    ensure_slot(node);
}

void Medium::prune(double t) {
    // Records can still matter for overlap checks of in-flight airtimes and
    // for DIFS-extended busy sensing; keep a safety margin.
    double horizon = t - (cfg_.difs + 0.05);
    while (!records_.empty() && records_.front()->end < horizon) records_.erase(records_.begin());
}

}  // namespace vanetlab
