#include "pronet/topology.hpp"

#include <deque>
#include <stdexcept>

namespace pronet {

void Topology::addLink(int a, int b, double capacityBps, double delay) {
    if (a < 0 || b < 0 || a >= nodeCount() || b >= nodeCount() || a == b)
        throw std::invalid_argument("bad link endpoints");
    if (capacityBps <= 0) throw std::invalid_argument("link capacity must be > 0");
    channels.push_back({a, b, capacityBps, delay});
    channels.push_back({b, a, capacityBps, delay});
}

void Topology::buildRouting() {
    int n = nodeCount();
    adj_.assign(n, {});
    chanOf_.assign(n, {});
    for (size_t i = 0; i < channels.size(); ++i) {
        adj_[channels[i].from].push_back(channels[i].to);
        chanOf_[channels[i].from].push_back(int(i));
    }
    ecmp_.assign(nHosts, {});
    std::vector<int> dist(n);
    for (int d = 0; d < nHosts; ++d) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<int> q{d};
        dist[d] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int v : adj_[u]) {
                if (dist[v] == -1) {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
        auto& next = ecmp_[d];
        next.assign(n, {});
        for (int u = 0; u < n; ++u) {
            if (u == d) continue;
            if (dist[u] == -1) throw std::invalid_argument("topology is disconnected");
            for (size_t j = 0; j < adj_[u].size(); ++j)
                if (dist[adj_[u][j]] == dist[u] - 1) next[u].push_back(adj_[u][j]);
        }
    }
}

int Topology::channelIndex(int from, int to) const {
    for (size_t j = 0; j < adj_[from].size(); ++j)
        if (adj_[from][j] == to) return chanOf_[from][j];
    throw std::invalid_argument("no channel between nodes");
}

int Topology::nextHop(int node, int dstHost, uint64_t flowHash) const {
    const auto& cands = ecmp_[dstHost][node];
    if (cands.empty()) throw std::logic_error("no route");
    // fold the current node in so multi-hop paths stay loop-free but vary
    uint64_t h = flowHash ^ (uint64_t(node) * 0x9e3779b97f4a7c15ull);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return cands[h % cands.size()];
}

uint64_t flow_hash(int tenantId, int src, int dst, uint64_t salt) {
    uint64_t h = salt;
    for (uint64_t v : {uint64_t(tenantId), uint64_t(src), uint64_t(dst)}) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xc2b2ae3d27d4eb4full;
        h ^= h >> 29;
    }
    return h;
}

Topology make_dumbbell(int senders, int receivers, double bottleneckBps,
                       double edgeBps, double delay) {
    if (senders < 1 || receivers < 1)
        throw std::invalid_argument("dumbbell needs senders and receivers");
    Topology t;
    t.nHosts = senders + receivers;
    t.nSwitches = 2;
    int swL = t.nHosts, swR = t.nHosts + 1;
    for (int i = 0; i < senders; ++i) t.addLink(i, swL, edgeBps, delay);
    for (int i = 0; i < receivers; ++i) t.addLink(senders + i, swR, edgeBps, delay);
    t.addLink(swL, swR, bottleneckBps, delay);
    t.buildRouting();
    return t;
}

Topology make_fattree(int k, double linkBps, double delay) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("fat-tree k must be even");
    Topology t;
    int half = k / 2;
    t.nHosts = k * k * k / 4;
    t.nSwitches = 5 * k * k / 4;  // k^2/2 edge + k^2/2 agg + k^2/4 core
    int edge0 = t.nHosts;
    int agg0 = edge0 + k * half;
    int core0 = agg0 + k * half;
    for (int pod = 0; pod < k; ++pod) {
        for (int e = 0; e < half; ++e) {
            int esw = edge0 + pod * half + e;
            for (int h = 0; h < half; ++h)
                t.addLink(pod * half * half + e * half + h, esw, linkBps, delay);
            for (int a = 0; a < half; ++a)
                t.addLink(esw, agg0 + pod * half + a, linkBps, delay);
        }
        for (int a = 0; a < half; ++a) {
            int asw = agg0 + pod * half + a;
            for (int c = 0; c < half; ++c)
                t.addLink(asw, core0 + a * half + c, linkBps, delay);
        }
    }
    t.buildRouting();
    return t;
}

}  // namespace pronet
