#pragma once

#include <cstdint>
#include <deque>
#include <random>

#include "pronet/packet.hpp"

namespace pronet {

// Three-register egress state machine distinguishing inter-tenant from
// intra-tenant congestion. A packet is tagged when a different tenant's
// packet passed through recently (within TH).
class TenantCounter {
public:
    explicit TenantCounter(double th) : th_(th) {}

    // Three-stage pipeline, one call per data packet. Returns the tag.
    bool update(int tenantId, double ts) {
        // stage 1: swap (LTid, LTS)
        int oldTid = ltid_;
        double oldTs = lts_;
        ltid_ = tenantId;
        lts_ = ts;
        // stage 2: remember the last cross-tenant handoff; the value used
        // downstream is the register's content *before* this update
        double stage2 = ldts_;
        if (oldTid != tenantId && oldTid != kNone && ts - oldTs < th_)
            ldts_ = oldTs;
        // stage 3: fresh cross-tenant history => inter-tenant congestion
        bool tag = ts - stage2 < th_;
        competitive_ = tag;
        return tag;
    }

    bool competitive() const { return competitive_; }
    double th() const { return th_; }

private:
    static constexpr int kNone = -2;
    double th_;
    int ltid_ = kNone;       // last tenant id
    double lts_ = -1e30;     // last timestamp
    double ldts_ = -1e30;    // last different-tenant timestamp
    bool competitive_ = false;
};

struct SwitchPortConfig {
    double capacityBps = 1e9;
    long long bufferLimitBytes = 400000;
    long long ecnMinBytes = 50000;
    long long ecnMaxBytes = 200000;
    bool tenantCounterEnabled = false;
    double tenantCounterTH = 0.1;
};

struct SwitchPortCounters {
    uint64_t enqueuedBytes = 0;
    uint64_t droppedBytes = 0;
    uint64_t droppedPackets = 0;
    uint64_t markedPackets = 0;
};

// Output port: drop-tail data FIFO with a RED-style linear ECN ramp and a
// strict-priority control lane (never marked, never dropped).
class SwitchPort {
public:
    explicit SwitchPort(const SwitchPortConfig& cfg, uint64_t rngSeed = 1)
        : cfg_(cfg), tc_(cfg.tenantCounterTH), rng_(rngSeed) {}

    // Returns false on drop-tail. Marks/tags the packet in place.
    bool enqueue(Packet pkt, double now);

    bool empty() const { return ctrl_.empty() && data_.empty(); }
    size_t queuedPackets() const { return ctrl_.size() + data_.size(); }
    long long queuedDataBytes() const { return dataBytes_; }

    // Control lane drains before any data packet.
    Packet dequeue();

    const SwitchPortCounters& counters() const { return counters_; }
    const TenantCounter& tenantCounter() const { return tc_; }

private:
    SwitchPortConfig cfg_;
    TenantCounter tc_;
    std::mt19937_64 rng_;
    std::deque<Packet> data_;
    std::deque<Packet> ctrl_;
    long long dataBytes_ = 0;
    SwitchPortCounters counters_;
};

}  // namespace pronet
