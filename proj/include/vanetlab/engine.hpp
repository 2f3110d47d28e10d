#ifndef VANETLAB_ENGINE_HPP
#define VANETLAB_ENGINE_HPP

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "vanetlab/config.hpp"
#include "vanetlab/event_queue.hpp"
#include "vanetlab/medium.hpp"
#include "vanetlab/protocol.hpp"
#include "vanetlab/radio.hpp"
#include "vanetlab/traffic.hpp"

namespace vanetlab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

enum class RangeKind { carrier_sense, nominal_rx };

// One node's world state: mobility leg, RNG substreams, protocol instance.
struct NodeState {
    int id = -1;
    Vec2 leg_origin;          // position at leg_start (or the rest position)
    double leg_start = 0.0;
    Vec2 target;
    bool moving = false;
    bool pinned = false;      // static placement, no waypoint draws
    std::mt19937_64 rng_mobility, rng_mac, rng_fading, rng_jitter;
    std::unique_ptr<RoutingProtocol> protocol;
    std::unique_ptr<NodeApi> api;
};

// Single-threaded deterministic simulation run: random-waypoint mobility,
// Nakagami reception, slotted p-persistent MAC, one routing protocol
// instance per node and CBR traffic on top.
class Engine {
public:
    Engine(const ScenarioConfig& cfg, uint64_t seed);
    ~Engine();

    // Pre-init hooks (tests and experiments).
    void set_protocol_factory(ProtocolFactory factory);
    void preset_position(int node, double x, double y);  // pins the node
    void set_trace_sink(std::ostream* sink);

    void init();
    void run();  // processes events up to the configured duration

    // Scripted mobility: teleports the node at time t (usable post-init).
    void schedule_reposition(double t, int node, double x, double y);

    double now() const { return queue_.now(); }
    double duration() const { return cfg_.duration; }
    const ScenarioConfig& config() const { return cfg_; }
    uint64_t seed() const { return seed_; }

    Vec2 position(int node, double t) const;
    std::vector<int> neighbor_set(int node, double t, RangeKind kind) const;
    double range(RangeKind kind) const;

    EventQueue& queue() { return queue_; }
    Medium& medium() { return *medium_; }
    MetricsCollector& metrics() { return metrics_; }
    RoutingProtocol& protocol(int node) { return *nodes_[node].protocol; }
    NodeState& node(int id) { return nodes_[id]; }
    int node_count() const { return static_cast<int>(nodes_.size()); }

    MetricsReport report() const;

    // Internals shared with the medium and node APIs.
    double reception_prob(double dist) const;
    void frame_received(int node, const Frame& frame);
    void trace_line(EventKind kind, int node, const std::string& detail);
    bool tracing() const { return trace_sink_ != nullptr; }

private:
    void init_mobility(int node);
    void begin_leg(int node);
    void on_arrival(int node);
    void schedule_flow_tick(const Flow& flow, double t);

    ScenarioConfig cfg_;
    uint64_t seed_;
    EventQueue queue_;
    std::unique_ptr<Medium> medium_;
    MetricsCollector metrics_;
    std::vector<NodeState> nodes_;
    std::vector<Flow> flows_;
    std::map<int, Vec2> preset_positions_;
    ProtocolFactory factory_;
    std::ostream* trace_sink_ = nullptr;
    long next_packet_id_ = 0;
    bool initialized_ = false;
};

// Convenience: build, init and run one scenario, returning the report.
MetricsReport run_scenario(const ScenarioConfig& cfg, uint64_t seed);

}  // namespace vanetlab

#endif
