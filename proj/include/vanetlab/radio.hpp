#ifndef VANETLAB_RADIO_HPP
#define VANETLAB_RADIO_HPP

#include <vector>

namespace vanetlab {

// Distance-dependent Nakagami-m fading over a power-law path loss. The
// instantaneous received power is Gamma(m(d)) distributed around the mean
// P(d) = reference_power * (reference_distance / d)^pathloss_exponent.
struct NakagamiProfile {
    struct Breakpoint {
        double max_distance;  // shape applies up to this distance
        double m;             // Nakagami shape, >= 0.5
    };

    std::vector<Breakpoint> breakpoints;
    double pathloss_exponent = 2.8;
    double reference_distance = 1.0;
    double reference_power = 1.0;  // mean power at reference distance
    double rx_threshold = 1.0;     // same scale as reference_power

    void validate() const;
    double shape_at(double distance) const;
    double mean_power(double distance) const;

    // m = 3 below 80 m, 1.5 to 200 m, 1 beyond; exponent 2.8; mean power
    // crosses rx_threshold at nominal_range.
    static NakagamiProfile defaults(double nominal_range = 250.0);
};

// P(instantaneous power > rx_threshold) = Q(m, m * threshold / mean_power),
// the regularized upper incomplete gamma function.
double reception_probability(double distance, const NakagamiProfile& profile);

}  // namespace vanetlab

#endif
