#include "pronet/switch_port.hpp"

#include <stdexcept>

namespace pronet {

bool SwitchPort::enqueue(Packet pkt, double now) {
    if (pkt.control()) {
        // strict-priority lane: not marked, not counted against the buffer
        ctrl_.push_back(pkt);
        counters_.enqueuedBytes += pkt.sizeBytes;
        return true;
    }
    if (dataBytes_ + pkt.sizeBytes > cfg_.bufferLimitBytes) {
        counters_.droppedBytes += pkt.sizeBytes;
        counters_.droppedPackets += 1;
        return false;
    }
    // linear marking ramp on the depth seen by the arriving packet
    long long depth = dataBytes_;
    bool marked = false;
    if (depth >= cfg_.ecnMaxBytes) {
        marked = true;
    } else if (depth > cfg_.ecnMinBytes) {
        double p = double(depth - cfg_.ecnMinBytes) /
                   double(cfg_.ecnMaxBytes - cfg_.ecnMinBytes);
        marked = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
    }
    if (marked) {
        pkt.ecnMarked = true;
        counters_.markedPackets += 1;
    }
    if (cfg_.tenantCounterEnabled) {
        bool tag = tc_.update(pkt.tenantId, now);
        // the flag travels with an actual congestion mark; like the mark
        // itself it is sticky across hops
        if (marked && tag) pkt.interTenant = true;
    }
    data_.push_back(pkt);
    dataBytes_ += pkt.sizeBytes;
    counters_.enqueuedBytes += pkt.sizeBytes;
    return true;
}

Packet SwitchPort::dequeue() {
    if (!ctrl_.empty()) {
        Packet p = ctrl_.front();
        ctrl_.pop_front();
        return p;
    }
    if (data_.empty()) throw std::logic_error("dequeue from empty port");
    Packet p = data_.front();
    data_.pop_front();
    dataBytes_ -= p.sizeBytes;
    return p;
}

}  // namespace pronet
