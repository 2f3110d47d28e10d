#include "vanetlab/engine.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "vanetlab/rng.hpp"

namespace vanetlab {

double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

namespace {

// Per-node facade over the engine handed to the protocol instance.
class NodeApiImpl : public NodeApi {
public:
    NodeApiImpl(Engine& eng, int node, const ProtocolParams& params)
        : eng_(eng), node_(node), params_(params) {}

    int self() const override { return node_; }
    double now() const override { return eng_.now(); }
    const ProtocolParams& params() const override { return params_; }
    std::mt19937_64& jitter_rng() override { return eng_.node(node_).rng_jitter; }

    void schedule(double delay, EventKind kind, std::function<void()> fn) override {
        eng_.queue().schedule(eng_.now() + delay, kind, node_, std::move(fn));
    }

    bool mac_send(Frame frame, int mac_dst, MacHandlers handlers) override {
        return eng_.medium().enqueue(node_, std::move(frame), mac_dst, std::move(handlers));
    }

    void deliver_data(const Frame& frame) override {
        eng_.metrics().record_delivery(frame.seqno, eng_.now());
        if (eng_.tracing())
            eng_.trace_line(EventKind::frame_delivery, node_,
                            "deliver id=" + std::to_string(frame.seqno) +
                                " hops=" + std::to_string(frame.hops));
    }

    void count_drop(DropCause cause) override {
        eng_.metrics().count_drop(cause);
        if (eng_.tracing())
            eng_.trace_line(EventKind::frame_delivery, node_,
                            std::string("drop cause=") + to_string(cause));
    }

    void trace(const std::string& detail) override {
        if (eng_.tracing()) eng_.trace_line(EventKind::protocol_timer, node_, detail);
    }

private:
    Engine& eng_;
    int node_;
    ProtocolParams params_;
};

}  // namespace

Engine::Engine(const ScenarioConfig& cfg, uint64_t seed) : cfg_(cfg), seed_(seed) {
    cfg_.validate();
    cfg_.radio.validate();
    cfg_.mac.validate();
    medium_ = std::make_unique<Medium>(*this, cfg_.mac, cfg_.nodes);
}

Engine::~Engine() = default;

void Engine::set_protocol_factory(ProtocolFactory factory) { factory_ = std::move(factory); }

void Engine::preset_position(int node, double x, double y) {
    preset_positions_[node] = Vec2{x, y};
}

void Engine::set_trace_sink(std::ostream* sink) { trace_sink_ = sink; }

void Engine::init() {
    if (initialized_) throw std::logic_error("Engine: init called twice");
    initialized_ = true;

    ProtocolParams params = cfg_.effective_protocol_params();
    if (!factory_) factory_ = make_protocol_factory(cfg_.protocol);

    nodes_.resize(cfg_.nodes);
    for (int i = 0; i < cfg_.nodes; ++i) {
        NodeState& n = nodes_[i];
        n.id = i;
        n.rng_mobility = make_stream(seed_, i, RngPurpose::mobility);
        n.rng_mac = make_stream(seed_, i, RngPurpose::mac);
        n.rng_fading = make_stream(seed_, i, RngPurpose::fading);
        n.rng_jitter = make_stream(seed_, i, RngPurpose::jitter);
        init_mobility(i);
        n.api = std::make_unique<NodeApiImpl>(*this, i, params);
        n.protocol = factory_(*n.api, params);
    }
    for (int i = 0; i < cfg_.nodes; ++i) nodes_[i].protocol->start();

    flows_ = spawn_flows(cfg_.traffic.connections, cfg_.nodes, cfg_.traffic, cfg_.duration, seed_);
    for (const Flow& f : flows_) schedule_flow_tick(f, f.start);

    queue_.schedule(cfg_.duration, EventKind::metrics_sample, -1, [this] {
        medium_->finalize();
        trace_line(EventKind::metrics_sample, -1, "end");
    });
}

void Engine::init_mobility(int node) {
    NodeState& n = nodes_[node];
    auto preset = preset_positions_.find(node);
    if (preset != preset_positions_.end()) {
        n.leg_origin = preset->second;
        n.pinned = true;
        return;
    }
    n.leg_origin = {uniform(n.rng_mobility, 0.0, cfg_.arena_x),
                    uniform(n.rng_mobility, 0.0, cfg_.arena_y)};
    bool is_static = cfg_.speed <= 0.0 || cfg_.pause_time >= cfg_.duration;
    if (is_static) {
        n.pinned = true;
        return;
    }
    begin_leg(node);
}

void Engine::begin_leg(int node) {
    NodeState& n = nodes_[node];
    n.target = {uniform(n.rng_mobility, 0.0, cfg_.arena_x),
                uniform(n.rng_mobility, 0.0, cfg_.arena_y)};
    n.leg_start = now();
    n.moving = true;
    double travel = distance(n.leg_origin, n.target) / cfg_.speed;
    if (tracing())
        trace_line(EventKind::mobility_update, node,
                   "waypoint x=" + std::to_string(n.target.x) + " y=" + std::to_string(n.target.y));
    queue_.schedule(now() + travel, EventKind::mobility_update, node, [this, node] { on_arrival(node); });
}

void Engine::on_arrival(int node) {
    NodeState& n = nodes_[node];
    n.leg_origin = n.target;
    n.leg_start = now();
    n.moving = false;
    if (cfg_.pause_time <= 0.0) {
        begin_leg(node);
    } else {
        queue_.schedule(now() + cfg_.pause_time, EventKind::mobility_update, node,
                        [this, node] { begin_leg(node); });
    }
}

void Engine::schedule_reposition(double t, int node, double x, double y) {
    queue_.schedule(t, EventKind::mobility_update, node, [this, node, x, y] {
        NodeState& n = nodes_[node];
        n.leg_origin = {x, y};
        n.leg_start = now();
        n.moving = false;
        if (tracing())
            trace_line(EventKind::mobility_update, node,
                       "teleport x=" + std::to_string(x) + " y=" + std::to_string(y));
    });
}

Vec2 Engine::position(int node, double t) const {
    const NodeState& n = nodes_[node];
    if (!n.moving) return n.leg_origin;
    double leg_len = distance(n.leg_origin, n.target);
    if (leg_len <= 0.0) return n.target;
    double frac = cfg_.speed * (t - n.leg_start) / leg_len;
    if (frac >= 1.0) return n.target;
    if (frac <= 0.0) return n.leg_origin;
    return {n.leg_origin.x + frac * (n.target.x - n.leg_origin.x),
            n.leg_origin.y + frac * (n.target.y - n.leg_origin.y)};
}

double Engine::range(RangeKind kind) const {
    return kind == RangeKind::carrier_sense ? cfg_.mac.cs_range : cfg_.nominal_range;
}

std::vector<int> Engine::neighbor_set(int node, double t, RangeKind kind) const {
    std::vector<int> out;
    Vec2 p = position(node, t);
    double r = range(kind);
    for (int i = 0; i < node_count(); ++i) {
        if (i == node) continue;
        if (distance(p, position(i, t)) <= r) out.push_back(i);
    }
    return out;
}

double Engine::reception_prob(double dist) const {
    return reception_probability(std::max(dist, 1.0), cfg_.radio);
}

void Engine::frame_received(int node, const Frame& frame) {
    nodes_[node].protocol->handle_frame(frame);
}

void Engine::schedule_flow_tick(const Flow& flow, double t) {
    if (t > flow.stop || t > cfg_.duration) return;
    queue_.schedule(t, EventKind::traffic_tick, flow.src, [this, flow, t] {
        long id = next_packet_id_++;
        metrics_.record_send(id, now());
        if (tracing())
            trace_line(EventKind::traffic_tick, flow.src,
                       "send id=" + std::to_string(id) + " dst=" + std::to_string(flow.dst));
        nodes_[flow.src].protocol->send_data(flow.dst, flow.packet_size, id);
        schedule_flow_tick(flow, t + 1.0 / flow.rate);
    });
}

void Engine::run() {
    if (!initialized_) init();
    while (!queue_.empty() && queue_.peek_time() <= cfg_.duration) {
        Event e = queue_.pop();
        e.fn();
    }
}

MetricsReport Engine::report() const {
    return metrics_.compute(cfg_.duration, cfg_.traffic.packet_size);
}

void Engine::trace_line(EventKind kind, int node, const std::string& detail) {
    if (!trace_sink_) return;
    char head[64];
    std::snprintf(head, sizeof(head), "%.9f\t%s\t%d\t", now(), to_string(kind), node);
    *trace_sink_ << head << detail << '\n';
}

MetricsReport run_scenario(const ScenarioConfig& cfg, uint64_t seed) {
    Engine eng(cfg, seed);
    eng.init();
    eng.run();
    return eng.report();
}

}  // namespace vanetlab
