#pragma once

#include <cstdint>
#include <vector>

namespace pronet {

// Unidirectional channel; every physical link contributes two.
struct Channel {
    int from;
    int to;
    double capacityBps;
    double delay;  // propagation, seconds
};

// Node ids: hosts are [0, nHosts), switches [nHosts, nHosts + nSwitches).
class Topology {
public:
    int nHosts = 0;
    int nSwitches = 0;
    std::vector<Channel> channels;

    int nodeCount() const { return nHosts + nSwitches; }
    bool isHost(int n) const { return n >= 0 && n < nHosts; }

    // Adds both directions.
    void addLink(int a, int b, double capacityBps, double delay);

    // Computes shortest-path next hops per destination host; throws if any
    // host pair is unreachable.
    void buildRouting();

    int channelIndex(int from, int to) const;

    // ECMP choice among equal-cost next hops, deterministic in the hash.
    int nextHop(int node, int dstHost, uint64_t flowHash) const;

    const std::vector<int>& neighbors(int node) const { return adj_[node]; }

private:
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<int>> chanOf_;  // [node] aligned with adj_
    // ecmp_[dst][node] = next-hop candidates toward host dst
    std::vector<std::vector<std::vector<int>>> ecmp_;
};

Topology make_dumbbell(int senders, int receivers, double bottleneckBps,
                       double edgeBps, double delay);
Topology make_fattree(int k, double linkBps, double delay);

uint64_t flow_hash(int tenantId, int src, int dst, uint64_t salt);

}  // namespace pronet
