#pragma once

#include <cstdint>

namespace pronet {

enum class PacketKind : uint8_t {
    Data,
    Ack,               // per-packet receiver ack (may echo ECN)
    CongestionSignal,  // CAWC signal, receiver -> sender
    UsageReport,       // host -> coordinator
    TargetUpdate,      // coordinator -> host
};

struct Packet {
    uint64_t id = 0;
    PacketKind kind = PacketKind::Data;
    int tenantId = -1;
    int srcHost = -1;
    int dstHost = -1;
    int sizeBytes = 0;
    uint64_t seq = 0;        // per-flow sequence number (AIMD bookkeeping)
    uint64_t sourceId = 0;   // originating traffic source
    double sendTime = 0.0;
    bool ecnMarked = false;
    bool interTenant = false;  // tenant-counter tag carried with the mark
    bool ecnEcho = false;      // on acks: data packet was marked
    bool signalInterTenant = false;  // on congestion signals

    bool control() const { return kind != PacketKind::Data; }
};

}  // namespace pronet
