#ifndef VANETLAB_FRAME_HPP
#define VANETLAB_FRAME_HPP

#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace vanetlab {

enum class FrameKind { data, rreq, rrep, rerr, fsr_update, hello, tc };
constexpr int kFrameKindCount = 7;

const char* to_string(FrameKind kind);

constexpr int kBroadcast = -1;

struct RreqPayload {
    int target;
    long request_id;
    std::vector<int> route;  // traversed path, originator first
    std::optional<std::pair<int, int>> broken_link;  // piggy-backed route error
};

struct RrepPayload {
    std::vector<int> route;  // full source route, originator..target
};

struct RerrPayload {
    int from;
    int to;  // broken link (from -> to)
};

struct FsrLinkState {
    int origin;
    int seqno;
    std::vector<int> neighbors;
};

struct FsrPayload {
    std::vector<FsrLinkState> entries;
};

struct HelloPayload {
    std::vector<std::pair<int, bool>> neighbors;  // (id, sender selected it as MPR)
};

struct TcPayload {
    int ansn;
    std::vector<int> selectors;
};

// One over-the-air frame. Payloads are shared so per-receiver copies stay
// cheap; receivers treat them as immutable.
struct Frame {
    FrameKind kind = FrameKind::data;
    int src = -1;          // originator
    int dst = kBroadcast;  // final destination (not the link-level receiver)
    int tx_node = -1;      // current transmitter, stamped by the medium
    int mac_dst = kBroadcast;  // link-level addressee, stamped by the medium
    int size = 0;          // bytes on the wire
    int ttl = 0;           // decremented once per forward
    double born_at = 0.0;
    long seqno = 0;  // data: packet id; control: originator sequence
    int hops = 0;
    int salvage_count = 0;
    int maint_rexmt = 0;
    std::vector<int> route;  // source route (data/rrep/rerr travel path)
    int route_idx = 0;       // index of the current holder within route

    std::shared_ptr<const RreqPayload> rreq;
    std::shared_ptr<const RrepPayload> rrep;
    std::shared_ptr<const RerrPayload> rerr;
    std::shared_ptr<const FsrPayload> fsr;
    std::shared_ptr<const HelloPayload> hello;
    std::shared_ptr<const TcPayload> tc;
};

}  // namespace vanetlab

#endif
