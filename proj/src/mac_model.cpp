#include "vanetlab/mac_model.hpp"

#include <cmath>
#include <stdexcept>

#include "vanetlab/rng.hpp"

namespace vanetlab {

void MacParams::validate() const {
    if (!(p > 0.0) || p > 1.0) throw std::domain_error("MacParams: p must be in (0,1]");
    if (q < 1) throw std::domain_error("MacParams: q must be >= 1");
    if (!(tau_slot > 0.0)) throw std::domain_error("MacParams: tau_slot must be > 0");
    if (tau_pack < 1.0) throw std::domain_error("MacParams: tau_pack must be >= 1 slot");
    if (tau_difs < 0.0) throw std::domain_error("MacParams: tau_difs must be >= 0");
}

double geom_success_pmf(double p, int z) {
    if (!(p > 0.0) || p > 1.0) throw std::domain_error("geom_success_pmf: p out of (0,1]");
    if (z < 1) throw std::domain_error("geom_success_pmf: z must be >= 1");
    return std::pow(1.0 - p, z - 1) * p;
}

double avg_contention_window(double p) {
    if (!(p > 0.0) || p > 1.0) throw std::domain_error("avg_contention_window: p out of (0,1]");
    return 2.0 / p - 1.0;
}

double tx_probability_from_cw(double cw) {
    if (cw < 1.0) throw std::domain_error("tx_probability_from_cw: cw must be >= 1");
    return 2.0 / (cw + 1.0);
}

SlotOutcomeProbs slot_outcome_probs(const MacParams& params) {
    params.validate();
    double none = std::pow(1.0 - params.p, params.q);
    double one = params.q * params.p * std::pow(1.0 - params.p, params.q - 1);
    return {none, one, 1.0 - none};
}

std::pair<double, double> conditional_success_collision(const MacParams& params,
                                                        CondSuccessVariant variant) {
    params.validate();
    if (params.q == 1) return {1.0, 0.0};
    auto probs = slot_outcome_probs(params);
    if (!(probs.p_any > 0.0))
        throw std::domain_error("conditional_success_collision: conditioning event has probability 0");
    int exponent = variant == CondSuccessVariant::corrected ? params.q - 1 : params.q;
    double p_s = params.q * params.p * std::pow(1.0 - params.p, exponent) / probs.p_any;
    return {p_s, 1.0 - p_s};
}

VirtualTxTime virtual_tx_time(const MacParams& params) {
    params.validate();
    double idle = std::pow(1.0 - params.p, params.q);
    double succ = params.q * params.p * std::pow(1.0 - params.p, params.q - 1);
    if (!(succ > 0.0))
        throw std::domain_error("virtual_tx_time: successful transmission impossible (p=1, q>1)");
    double coll = 1.0 - idle - succ;
    double busy_slots = params.tau_pack + params.tau_difs;

    VirtualTxTime out;
    out.t_idle = idle / succ * params.tau_slot;
    out.t_coll = coll / succ * busy_slots * params.tau_slot;
    out.t_succ = busy_slots * params.tau_slot;
    out.t_total = (busy_slots - (busy_slots - 1.0) * idle) / succ * params.tau_slot;
    return out;
}

McVirtualTxTime monte_carlo_virtual_tx_time(const MacParams& params, long n_successes,
                                            uint64_t seed) {
    params.validate();
    if (n_successes < 1)
        throw std::domain_error("monte_carlo_virtual_tx_time: n_successes must be >= 1");

    std::mt19937_64 rng(splitmix64(seed));
    double busy_cost = (params.tau_pack + params.tau_difs) * params.tau_slot;

    double idle_acc = 0.0, coll_acc = 0.0;
    double sum_idle = 0.0, sum_coll = 0.0, sum_succ = 0.0;
    double sum_total = 0.0, sum_total_sq = 0.0;
    long done = 0;

    while (done < n_successes) {
        int transmitters = 0;
        for (int i = 0; i < params.q && transmitters < 2; ++i)
            if (uniform01(rng) < params.p) ++transmitters;
        if (transmitters == 0) {
            idle_acc += params.tau_slot;
        } else if (transmitters >= 2) {
            coll_acc += busy_cost;
        } else {
            double total = idle_acc + coll_acc + busy_cost;
            sum_idle += idle_acc;
            sum_coll += coll_acc;
            sum_succ += busy_cost;
            sum_total += total;
            sum_total_sq += total * total;
            idle_acc = coll_acc = 0.0;
            ++done;
        }
    }

    double n = static_cast<double>(n_successes);
    McVirtualTxTime out;
    out.mean.t_idle = sum_idle / n;
    out.mean.t_coll = sum_coll / n;
    out.mean.t_succ = sum_succ / n;
    out.mean.t_total = sum_total / n;
    double var = n > 1 ? (sum_total_sq - sum_total * sum_total / n) / (n - 1.0) : 0.0;
    out.t_total_stderr = std::sqrt(std::max(0.0, var) / n);
    out.n_successes = n_successes;
    return out;
}

}  // namespace vanetlab
