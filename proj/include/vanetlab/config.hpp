#ifndef VANETLAB_CONFIG_HPP
#define VANETLAB_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vanetlab/medium.hpp"
#include "vanetlab/protocol.hpp"
#include "vanetlab/radio.hpp"
#include "vanetlab/traffic.hpp"

namespace vanetlab {

// One simulation scenario plus optional sweep axes. Every field has a
// default; the INI loader rejects unknown sections and keys.
struct ScenarioConfig {
    double arena_x = 1000.0;
    double arena_y = 1000.0;
    double duration = 900.0;
    int nodes = 25;
    double pause_time = 0.0;
    double speed = 30.0;  // m/s, constant
    ProtocolVariant protocol = ProtocolVariant::dsr;
    ProtocolMode mode = ProtocolMode::orig;
    std::vector<uint64_t> seeds = {1};

    MacConfig mac;
    NakagamiProfile radio = NakagamiProfile::defaults();
    double nominal_range = 250.0;  // where mean power crosses the threshold
    TrafficConfig traffic;
    // Protocol keys set in the file, re-applied on top of each (variant,
    // mode) Table-1 parameter set, e.g. {"dsr.cache_capacity", "512"}.
    std::vector<std::pair<std::string, std::string>> protocol_overrides;

    // Sweep axes (empty = use the scalar field).
    std::vector<double> pause_time_axis;
    std::vector<int> nodes_axis;
    std::vector<int> connections_axis;
    std::vector<ProtocolVariant> protocol_axis;
    std::vector<ProtocolMode> mode_axis;

    bool trace = false;
    std::string trace_file;

    void validate() const;
    bool has_axes() const;
    // Digest of everything that defines the scenario point except the seed.
    std::string scenario_id() const;
    // Protocol params for this point: Table-1 set for (protocol, mode) with
    // any file overrides re-applied.
    ProtocolParams effective_protocol_params() const;
};

ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

// Stable short digest used in scenario ids and parameter digests.
std::string fnv1a_hex(const std::string& data);

}  // namespace vanetlab

#endif
