#ifndef VANETLAB_MEDIUM_HPP
#define VANETLAB_MEDIUM_HPP

#include <deque>
#include <memory>
#include <vector>

#include "vanetlab/frame.hpp"
#include "vanetlab/protocol.hpp"

namespace vanetlab {

class Engine;

struct MacConfig {
    double tau_slot = 13e-6;   // seconds (802.11p, 10 MHz)
    double difs = 58e-6;       // seconds
    double bitrate = 6e6;      // bit/s
    double tx_prob = 0.125;    // per-slot transmission probability p
    int retry_limit = 4;       // unicast retransmissions
    int queue_limit = 50;      // frames per node
    double cs_range = 550.0;   // carrier-sense / interference range, m
    bool perfect_reception = false;  // disk reception at nominal range, no fading

    void validate() const;
};

struct MacStats {
    long tx_started = 0;
    long busy_periods = 0;
    long single_tx_periods = 0;
    long multi_tx_periods = 0;
    long control_dropped = 0;  // control frames lost to queue overflow
};

// Slotted p-persistent CSMA/CA shared by all nodes. Contention slots sit on
// a global tau_slot grid; a busy medium (any overlapping transmission within
// carrier-sense range, plus a trailing DIFS) defers contenders. Receivers
// that observe two or more overlapping transmissions get nothing.
class Medium {
public:
    Medium(Engine& engine, const MacConfig& cfg, int nodes);

    // Queues a frame for transmission. Returns false (frame dropped) when
    // the node's MAC queue is full.
    bool enqueue(int node, Frame frame, int mac_dst, MacHandlers handlers);

    bool idle(int node, double t) const;  // medium idle as sensed by node
    int queue_len(int node) const;
    const MacStats& stats() const { return stats_; }
    void finalize();  // closes the trailing busy period for stats

private:
    struct Outgoing {
        Frame frame;
        int mac_dst;
        MacHandlers handlers;
        int retries = 0;
    };

    struct NodeMac {
        std::deque<Outgoing> queue;
        bool slot_scheduled = false;
        bool transmitting = false;
    };

    struct TxRecord {
        int sender;
        int mac_dst;
        double start;
        double end;  // airtime end; DIFS extends the busy window only
        Frame frame;
        double sender_x, sender_y;
        bool dst_received = false;
    };

    double align_up(double t) const;
    double busy_until(int node, double t) const;
    void ensure_slot(int node);
    void on_slot(int node);
    void start_tx(int node);
    void resolve_delivery(const std::shared_ptr<TxRecord>& rec, int receiver, double rx_x,
                          double rx_y, double distance);
    void finish_tx(int node, const std::shared_ptr<TxRecord>& rec);
    void prune(double t);
    void note_busy_period(double start, double end);

    Engine& engine_;
    MacConfig cfg_;
    std::vector<NodeMac> nodes_;
    std::vector<std::shared_ptr<TxRecord>> records_;
    MacStats stats_;
    double period_start_ = -1.0, period_end_ = -1.0;
    int period_tx_ = 0;
};

}  // namespace vanetlab

#endif
