#include "vanetlab/protocol.hpp"

#include <stdexcept>

#include "vanetlab/dsr.hpp"
#include "vanetlab/fsr.hpp"
#include "vanetlab/olsr.hpp"
#include "vanetlab/rng.hpp"

namespace vanetlab {

const char* to_string(ProtocolVariant variant) {
    switch (variant) {
        case ProtocolVariant::dsr: return "dsr";
        case ProtocolVariant::fsr: return "fsr";
        case ProtocolVariant::olsr: return "olsr";
    }
    return "?";
}

const char* to_string(ProtocolMode mode) {
    return mode == ProtocolMode::orig ? "orig" : "mod";
}

ProtocolVariant protocol_variant_from_string(const std::string& s) {
    if (s == "dsr") return ProtocolVariant::dsr;
    if (s == "fsr") return ProtocolVariant::fsr;
    if (s == "olsr") return ProtocolVariant::olsr;
    throw std::runtime_error("unknown protocol: " + s);
}

ProtocolMode protocol_mode_from_string(const std::string& s) {
    if (s == "orig") return ProtocolMode::orig;
    if (s == "mod") return ProtocolMode::mod;
    throw std::runtime_error("unknown mode: " + s);
}

ProtocolParams ProtocolParams::make(ProtocolVariant variant, ProtocolMode mode) {
    ProtocolParams p;
    p.variant = variant;
    p.mode = mode;
    if (mode == ProtocolMode::mod) {
        p.dsr.non_propagating_ttl = 3;
        p.dsr.cache_capacity = 256;
        p.fsr.intra_interval = 1.0;
        p.fsr.inter_interval = 3.0;
        p.olsr.hello_interval = 1.0;
        p.olsr.tc_interval = 3.0;
    }
    return p;
}

void ProtocolParams::validate() const {
    if (dsr.non_propagating_ttl < 1 || dsr.non_propagating_ttl > 255)
        throw std::domain_error("dsr.non_propagating_ttl outside [1,255]");
    if (dsr.cache_capacity < 1) throw std::domain_error("dsr.cache_capacity must be >= 1");
    if (dsr.max_maint_rexmt < 0) throw std::domain_error("dsr.max_maint_rexmt must be >= 0");
    if (!(fsr.intra_interval > 0.0) || !(fsr.inter_interval > 0.0))
        throw std::domain_error("fsr intervals must be > 0");
    if (fsr.intra_interval >= fsr.inter_interval)
        throw std::domain_error("fsr.intra_interval must be < inter_interval");
    if (fsr.intra_radius >= fsr.inter_radius)
        throw std::domain_error("fsr.intra_radius must be < inter_radius");
    if (!(olsr.hello_interval > 0.0) || !(olsr.tc_interval > 0.0))
        throw std::domain_error("olsr intervals must be > 0");
    if (data_ttl < 1) throw std::domain_error("data_ttl must be >= 1");
    if (forward_jitter < 0.0) throw std::domain_error("forward_jitter must be >= 0");
}

ProtocolFactory make_protocol_factory(ProtocolVariant variant) {
    switch (variant) {
        case ProtocolVariant::dsr:
            return [](NodeApi& api, const ProtocolParams& p) -> std::unique_ptr<RoutingProtocol> {
                return std::make_unique<DsrNode>(api, p);
            };
        case ProtocolVariant::fsr:
            return [](NodeApi& api, const ProtocolParams& p) -> std::unique_ptr<RoutingProtocol> {
                return std::make_unique<FsrNode>(api, p);
            };
        case ProtocolVariant::olsr:
            return [](NodeApi& api, const ProtocolParams& p) -> std::unique_ptr<RoutingProtocol> {
                return std::make_unique<OlsrNode>(api, p);
            };
    }
    throw std::logic_error("make_protocol_factory: bad variant");
}

double jittered(double interval, bool enabled, std::mt19937_64& rng) {
    if (!enabled) return interval;
    return interval * uniform(rng, 0.9, 1.1);
}

}  // namespace vanetlab
