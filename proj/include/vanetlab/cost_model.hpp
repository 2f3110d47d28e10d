#ifndef VANETLAB_COST_MODEL_HPP
#define VANETLAB_COST_MODEL_HPP

#include <optional>
#include <vector>

#include "vanetlab/graph.hpp"

namespace vanetlab {

// Expanding ring search schedule: strictly increasing TTLs, first ring is the
// non-propagating RREQ TTL, last ring <= 255.
struct DsrErsSchedule {
    std::vector<int> rings;
    void validate() const;
};

// Inputs for the scoped (FSR) and MPR (OLSR) control-overhead formulas.
// Forwarding degrees are 1-based in the formulas; d_f[0] holds d_f[1].
struct ScopedCostParams {
    double d_avg_in = 0.0;
    double d_avg_out = 0.0;
    int n_in = 2;    // inner scope hop radius
    int n_out = 255; // outer scope hop radius
    double p_err = 0.0;
    std::vector<double> d_f;
    std::vector<double> d_f_mpr;
    double p_c_mpr = 0.0;  // probability the MPR set changed this interval
    int h = 1;             // network diameter, hops
    double horizon = 0.0;  // evaluation window, seconds
    double interval_intra = 5.0;
    double interval_inter = 15.0;
    double interval_hello = 2.0;
    double interval_tc = 5.0;

    void validate() const;
};

// Broadcast transmissions of a TTL-limited flood: the source plus every node
// strictly inside the ring; nodes at distance ttl receive but do not forward.
long ring_cost(const GraphSnapshot& g, int src, int ttl);

// Piecewise route-discovery cost: no reply -> all rings; reply from a TTL-1
// ring -> that ring alone; otherwise the rings up to and including the one
// that produced the reply.
long dsr_discovery_cost(const GraphSnapshot& g, int src, const DsrErsSchedule& schedule,
                        std::optional<int> rrep_ring);

// Per-scope series cost summed over periodic update instants in [0, horizon].
double fsr_cost(const ScopedCostParams& params);

struct OlsrUpdateCost {
    double c_nc;  // MPR-constrained retransmission cost
    double c_c;   // whole-network dissemination cost
};

OlsrUpdateCost olsr_update_cost(const ScopedCostParams& params);

// (c_nc + c_c) summed over TC update instants in [0, horizon].
double olsr_total_cost(const ScopedCostParams& params);

struct GraphStats {
    double d_avg = 0.0;
    int diameter = 0;
    std::vector<double> d_f;  // per-hop forwarding degrees, d_f[0] = hop 1
    bool connected = true;    // false -> stats are for the largest component
};

// Derives formula inputs from a snapshot. With src given, uses that node's
// BFS alone (diameter becomes its eccentricity); otherwise averages over all
// sources in the (largest) component.
GraphStats graph_stats(const GraphSnapshot& g, std::optional<int> src = std::nullopt);

}  // namespace vanetlab

#endif
