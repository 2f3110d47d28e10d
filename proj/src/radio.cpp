#include "vanetlab/radio.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vanetlab {

void NakagamiProfile::validate() const {
    if (breakpoints.empty()) throw std::domain_error("NakagamiProfile: no breakpoints");
    double prev = 0.0;
    for (const auto& bp : breakpoints) {
        if (bp.m < 0.5) throw std::domain_error("NakagamiProfile: m must be >= 0.5");
        if (!(bp.max_distance > prev))
            throw std::domain_error("NakagamiProfile: breakpoints must be sorted by distance");
        prev = bp.max_distance;
    }
    if (!(pathloss_exponent > 0.0)) throw std::domain_error("NakagamiProfile: exponent must be > 0");
    if (!(reference_distance > 0.0) || !(reference_power > 0.0) || !(rx_threshold > 0.0))
        throw std::domain_error("NakagamiProfile: reference values must be > 0");
}

double NakagamiProfile::shape_at(double distance) const {
    for (const auto& bp : breakpoints)
        if (distance <= bp.max_distance) return bp.m;
    return breakpoints.back().m;
}

double NakagamiProfile::mean_power(double distance) const {
    return reference_power * std::pow(reference_distance / distance, pathloss_exponent);
}

NakagamiProfile NakagamiProfile::defaults(double nominal_range) {
    NakagamiProfile p;
    p.breakpoints = {{80.0, 3.0}, {200.0, 1.5}, {std::numeric_limits<double>::infinity(), 1.0}};
    p.pathloss_exponent = 2.8;
    p.reference_distance = 1.0;
    p.rx_threshold = 1.0;
    p.reference_power = std::pow(nominal_range, p.pathloss_exponent);
    return p;
}

double reception_probability(double distance, const NakagamiProfile& profile) {
    if (!(distance > 0.0)) throw std::domain_error("reception_probability: distance must be > 0");
    profile.validate();
    double m = profile.shape_at(distance);
    double x = m * profile.rx_threshold / profile.mean_power(distance);
    return boost::math::gamma_q(m, x);
}

}  // namespace vanetlab
