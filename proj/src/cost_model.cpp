#include "vanetlab/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vanetlab {

void DsrErsSchedule::validate() const {
    if (rings.empty()) throw std::domain_error("DsrErsSchedule: empty schedule");
    int prev = 0;
    for (int ttl : rings) {
        if (ttl <= prev) throw std::domain_error("DsrErsSchedule: rings must be strictly increasing");
        prev = ttl;
    }
    if (rings.front() < 1) throw std::domain_error("DsrErsSchedule: first ring must be >= 1");
    if (rings.back() > 255) throw std::domain_error("DsrErsSchedule: last ring must be <= 255");
}

void ScopedCostParams::validate() const {
    auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!prob(p_err)) throw std::domain_error("ScopedCostParams: p_err outside [0,1]");
    if (!prob(p_c_mpr)) throw std::domain_error("ScopedCostParams: p_c_mpr outside [0,1]");
    if (n_in < 1 || n_out < 1 || h < 1) throw std::domain_error("ScopedCostParams: hop counts must be >= 1");
    if (!(interval_intra > 0.0) || !(interval_inter > 0.0) || !(interval_hello > 0.0) ||
        !(interval_tc > 0.0))
        throw std::domain_error("ScopedCostParams: intervals must be > 0");
    if (horizon < 0.0) throw std::domain_error("ScopedCostParams: horizon must be >= 0");
    for (double d : d_f)
        if (d < 0.0) throw std::domain_error("ScopedCostParams: d_f entries must be >= 0");
    for (double d : d_f_mpr)
        if (d < 0.0) throw std::domain_error("ScopedCostParams: d_f_mpr entries must be >= 0");
}

long ring_cost(const GraphSnapshot& g, int src, int ttl) {
    if (ttl < 1) throw std::domain_error("ring_cost: ttl must be >= 1");
    auto dist = bfs_distances(g, src);
    long tx = 1;  // the source always broadcasts
    for (int d : dist)
        if (d >= 1 && d <= ttl - 1) ++tx;
    return tx;
}

long dsr_discovery_cost(const GraphSnapshot& g, int src, const DsrErsSchedule& schedule,
                        std::optional<int> rrep_ring) {
    schedule.validate();
    int n_rings = static_cast<int>(schedule.rings.size());
    int last = n_rings - 1;
    if (rrep_ring) {
        if (*rrep_ring < 0 || *rrep_ring >= n_rings)
            throw std::domain_error("dsr_discovery_cost: rrep_ring out of range");
        if (schedule.rings[*rrep_ring] == 1) return ring_cost(g, src, 1);
        last = *rrep_ring;
    }
    long total = 0;
    for (int i = 0; i <= last; ++i) total += ring_cost(g, src, schedule.rings[i]);
    return total;
}

namespace {

// d_avg * sum_{i=1}^{radius-1} p_err^{i+1} * prod_{j=1}^{i} d_f[j]
double scope_series(double d_avg, int radius, double p_err, const std::vector<double>& d_f) {
    if (static_cast<int>(d_f.size()) < radius - 1)
        throw std::domain_error("cost series: d_f needs at least radius-1 entries");
    double sum = 0.0;
    double df_product = 1.0;
    double err_power = p_err;  // p_err^i before the extra factor
    for (int i = 1; i <= radius - 1; ++i) {
        df_product *= d_f[i - 1];
        err_power *= p_err;  // now p_err^{i+1}
        sum += err_power * df_product;
    }
    return d_avg * sum;
}

long update_instants(double horizon, double interval) {
    return static_cast<long>(std::floor(horizon / interval));
}

}  // namespace

double fsr_cost(const ScopedCostParams& params) {
    params.validate();
    double outer = scope_series(params.d_avg_out, params.n_out, params.p_err, params.d_f);
    double inner = scope_series(params.d_avg_in, params.n_in, params.p_err, params.d_f);
    return update_instants(params.horizon, params.interval_inter) * outer +
           update_instants(params.horizon, params.interval_intra) * inner;
}

OlsrUpdateCost olsr_update_cost(const ScopedCostParams& params) {
    params.validate();
    double d_avg = params.d_avg_out;
    double first_nc = (1.0 - params.p_c_mpr) * params.p_err * d_avg;
    double first_c = params.p_c_mpr * params.p_err * d_avg;
    OlsrUpdateCost out;
    out.c_nc = first_nc + scope_series(d_avg, params.h, params.p_err, params.d_f_mpr);
    out.c_c = first_c + scope_series(d_avg, params.h, params.p_err, params.d_f);
    return out;
}

double olsr_total_cost(const ScopedCostParams& params) {
    auto per_update = olsr_update_cost(params);
    return update_instants(params.horizon, params.interval_tc) * (per_update.c_nc + per_update.c_c);
}

GraphStats graph_stats(const GraphSnapshot& g, std::optional<int> src) {
    int n = g.node_count();
    if (n == 0) throw std::domain_error("graph_stats: empty graph");

    GraphStats stats;
    stats.d_avg = 2.0 * g.edge_count() / n;

    // Pick the component to measure: src's component, else the largest one.
    std::vector<int> members;
    if (src) {
        auto dist = bfs_distances(g, *src);
        for (int v = 0; v < n; ++v)
            if (dist[v] >= 0) members.push_back(v);
        stats.connected = static_cast<int>(members.size()) == n;
    } else {
        std::vector<bool> seen(n, false);
        std::vector<int> best;
        for (int v = 0; v < n; ++v) {
            if (seen[v]) continue;
            auto dist = bfs_distances(g, v);
            std::vector<int> comp;
            for (int u = 0; u < n; ++u)
                if (dist[u] >= 0) {
                    seen[u] = true;
                    comp.push_back(u);
                }
            if (comp.size() > best.size()) best = std::move(comp);
        }
        members = std::move(best);
        stats.connected = static_cast<int>(members.size()) == n;
    }

    std::vector<int> sources = src ? std::vector<int>{*src} : members;

    int diameter = 0;
    std::vector<std::vector<int>> ring_sizes;  // per source, count first reached at hop j
    for (int s : sources) {
        auto dist = bfs_distances(g, s);
        std::vector<int> rings;
        for (int v : members) {
            int d = dist[v];
            if (d < 0) continue;
            diameter = std::max(diameter, d);
            if (d >= 1) {
                if (static_cast<int>(rings.size()) < d) rings.resize(d, 0);
                ++rings[d - 1];
            }
        }
        ring_sizes.push_back(std::move(rings));
    }
    stats.diameter = diameter;

    // d_f[j] = mean over sources of ring(j+1)/max(1, ring(j)), j = 1..h-1.
    for (int j = 1; j <= diameter - 1; ++j) {
        double sum = 0.0;
        for (const auto& rings : ring_sizes) {
            int here = j - 1 < static_cast<int>(rings.size()) ? rings[j - 1] : 0;
            int next = j < static_cast<int>(rings.size()) ? rings[j] : 0;
            sum += static_cast<double>(next) / std::max(1, here);
        }
        stats.d_f.push_back(sum / ring_sizes.size());
    }
    return stats;
}

}  // namespace vanetlab
