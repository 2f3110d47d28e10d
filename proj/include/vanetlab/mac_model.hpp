#ifndef VANETLAB_MAC_MODEL_HPP
#define VANETLAB_MAC_MODEL_HPP

#include <cstdint>
#include <utility>

namespace vanetlab {

// Closed-form p-persistent CSMA/CA model. Times are expressed in slot units
// except tau_slot itself (seconds); config layers convert from seconds.
struct MacParams {
    double p = 0.125;       // per-slot transmission probability, (0,1]
    int q = 1;              // number of contending nodes, >= 1
    double tau_slot = 1.0;  // slot duration, seconds
    double tau_pack = 1.0;  // packet airtime, slots, >= 1
    double tau_difs = 0.0;  // DIFS, slots, >= 0

    void validate() const;  // throws std::domain_error
};

struct SlotOutcomeProbs {
    double p_none;  // no node transmits
    double p_one;   // exactly one transmits
    double p_any;   // at least one transmits
};

struct VirtualTxTime {
    double t_idle;   // expected idle time per virtual transmission, seconds
    double t_coll;   // expected collision time, seconds
    double t_succ;   // expected success time, seconds
    double t_total;  // sum, seconds
};

// The printed conditional-success numerator uses exponent Q; that is
// inconsistent with the only-one-transmission probability and breaks
// p_s + p_c = 1, so the default uses Q-1. The printed variant stays
// available for comparison.
enum class CondSuccessVariant { corrected, as_printed };

// P(first success on slot z) for a geometric back-off with parameter p.
double geom_success_pmf(double p, int z);

// Mean contention window solving (cw+1)/2 = 1/p.
double avg_contention_window(double p);

// Inverse mapping, p = 2/(cw+1).
double tx_probability_from_cw(double cw);

SlotOutcomeProbs slot_outcome_probs(const MacParams& params);

// (p_s, p_c): success/collision probability conditioned on at least one
// transmission in the slot.
std::pair<double, double> conditional_success_collision(
    const MacParams& params, CondSuccessVariant variant = CondSuccessVariant::corrected);

// Renewal decomposition of the expected time between consecutive successful
// transmissions: idle slots cost tau_slot, busy slots (success or collision)
// cost (tau_pack + tau_difs) * tau_slot.
VirtualTxTime virtual_tx_time(const MacParams& params);

struct McVirtualTxTime {
    VirtualTxTime mean;
    double t_total_stderr;  // sample standard error of the per-success total
    long n_successes;
};

// Slot-level Monte Carlo oracle for virtual_tx_time. Each of q nodes
// transmits independently with probability p every slot; deterministic for a
// fixed seed.
McVirtualTxTime monte_carlo_virtual_tx_time(const MacParams& params, long n_successes,
                                            uint64_t seed);

}  // namespace vanetlab

#endif
