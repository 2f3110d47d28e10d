#ifndef VANETLAB_PROTOCOL_HPP
#define VANETLAB_PROTOCOL_HPP

#include <functional>
#include <memory>
#include <random>
#include <string>

#include "vanetlab/event_queue.hpp"
#include "vanetlab/frame.hpp"
#include "vanetlab/traffic.hpp"

namespace vanetlab {

enum class ProtocolVariant { dsr, fsr, olsr };
enum class ProtocolMode { orig, mod };

const char* to_string(ProtocolVariant variant);
const char* to_string(ProtocolMode mode);
ProtocolVariant protocol_variant_from_string(const std::string& s);
ProtocolMode protocol_mode_from_string(const std::string& s);

struct DsrParams {
    int non_propagating_ttl = 1;  // orig 1, mod 3
    int cache_capacity = 1024;    // orig 1024, mod 256
    int max_maint_rexmt = 2;
    int salvage_limit = 4;
    int send_buffer_size = 64;
    double send_buffer_timeout = 30.0;
    int max_discovery_retries = 3;
    double ring_timeout = 0.2;      // non-propagating ring
    double flood_timeout = 0.5;     // network-wide ring, also retry backoff base
    bool gratuitous_rreps = true;
};

struct FsrParams {
    double intra_interval = 5.0;  // orig 5, mod 1
    double inter_interval = 15.0; // orig 15, mod 3
    int intra_radius = 2;
    int inter_radius = 255;
    double neighbor_timeout_factor = 3.0;  // x intra_interval
    double entry_timeout_factor = 3.0;     // x inter_interval
};

struct OlsrParams {
    double hello_interval = 2.0;  // orig 2, mod 1
    double tc_interval = 5.0;     // orig 5, mod 3
    double neighbor_hold_factor = 3.0;  // x hello_interval
    double topology_hold_factor = 3.0;  // x tc_interval
    bool triggered_tc = true;
    double triggered_tc_spacing = 0.5;
};

struct ProtocolParams {
    ProtocolVariant variant = ProtocolVariant::dsr;
    ProtocolMode mode = ProtocolMode::orig;
    DsrParams dsr;
    FsrParams fsr;
    OlsrParams olsr;
    bool timer_jitter = true;          // +-10% on periodic timers
    double forward_jitter = 0.01;      // max broadcast re-forward stagger, s
    int data_ttl = 64;

    // Table-driven orig/mod parameter sets; mod touches exactly the six
    // protocol knobs and nothing else.
    static ProtocolParams make(ProtocolVariant variant, ProtocolMode mode);
    void validate() const;
};

// Completion callbacks for a MAC submission. on_complete fires when the
// frame leaves the MAC (delivered tells whether a unicast reached its
// link-level destination); on_link_failure fires instead when the retry
// limit is exhausted.
struct MacHandlers {
    std::function<void(const Frame&, bool delivered)> on_complete;
    std::function<void(const Frame&, int next_hop)> on_link_failure;
};

// Per-node view of the engine handed to protocol state machines.
class NodeApi {
public:
    virtual ~NodeApi() = default;
    virtual int self() const = 0;
    virtual double now() const = 0;
    virtual const ProtocolParams& params() const = 0;
    virtual std::mt19937_64& jitter_rng() = 0;
    virtual void schedule(double delay, EventKind kind, std::function<void()> fn) = 0;
    // false if the MAC queue is full (the frame was dropped).
    virtual bool mac_send(Frame frame, int mac_dst, MacHandlers handlers) = 0;
    virtual void deliver_data(const Frame& frame) = 0;
    virtual void count_drop(DropCause cause) = 0;
    virtual void trace(const std::string& detail) = 0;
};

class RoutingProtocol {
public:
    virtual ~RoutingProtocol() = default;
    virtual void start() = 0;
    // Every successfully received frame, addressed or overheard.
    virtual void handle_frame(const Frame& frame) = 0;
    virtual void send_data(int dst, int payload_bytes, long packet_id) = 0;

    // Stats hooks used by experiments; protocols without the concept keep 0.
    virtual long triggered_updates() const { return 0; }
    virtual long periodic_updates() const { return 0; }
    virtual long coverage_violations() const { return 0; }
};

using ProtocolFactory =
    std::function<std::unique_ptr<RoutingProtocol>(NodeApi&, const ProtocolParams&)>;

// Factory for the configured variant (DSR, FSR or OLSR).
ProtocolFactory make_protocol_factory(ProtocolVariant variant);

// interval +- 10% uniform jitter when enabled.
double jittered(double interval, bool enabled, std::mt19937_64& rng);

}  // namespace vanetlab

#endif
