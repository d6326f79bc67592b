#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <vector>

#include "pronet/coordinator.hpp"
#include "pronet/host_agent.hpp"
#include "pronet/metrics.hpp"
#include "pronet/packet.hpp"
#include "pronet/scenario.hpp"
#include "pronet/switch_port.hpp"
#include "pronet/topology.hpp"

namespace pronet {

// Deterministic sequential event loop driving hosts, switches, the
// coordinator and the traffic sources described by a scenario.
class Simulation {
public:
    explicit Simulation(const Scenario& sc);

    MetricsLog run();

    double now() const { return now_; }

private:
    struct Event {
        double time;
        uint64_t seq;
        std::function<void()> fn;
    };
    struct EventCmp {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    struct SourceState {
        SourceSpec spec;
        uint64_t id;
        FlowKey key;
        // cbr
        std::deque<Packet> backlog;
        bool pumpScheduled = false;
        // aimd
        double cwnd = 4.0;
        uint64_t nextSeq = 0;
        uint64_t lastAcked = 0;
        uint64_t totalPackets = 0;  // 0 = long-lived
        uint64_t ackedAtLastRtoCheck = 0;
        double srtt = 1e-3;
        double lastDecrease = -1.0;
        bool sendLoopScheduled = false;
        bool done = false;
        double startedAt = 0.0;
        // poisson
        std::mt19937_64 rng{0};
        int spawned = 0;
    };

    struct FlowStat {
        std::string id;
        uint64_t delivered = 0;
        uint64_t lastDelivered = 0;
        uint64_t drops = 0;
    };

    void schedule(double t, std::function<void()> fn);

    void injectFromHost(Packet pkt, int host);
    void forward(Packet pkt, int node);
    void kick(int chan);
    void arrive(Packet pkt, int node);
    void deliverData(Packet& pkt, int node);

    void cbrGenerate(SourceState& s);
    void cbrPump(SourceState& s);
    void aimdSendLoop(SourceState& s);
    void aimdOnAck(SourceState& s, const Packet& ack);
    void aimdRtoCheck(SourceState& s);
    void poissonSpawn(SourceState& s);

    void hostReport(int host, uint64_t seqNo);
    void rateTick(int host);
    void coordinatorClose();
    void sample(int index);

    SourceState& newAimdFlow(const SourceSpec& spec, double start);
    FlowStat& flowStat(const FlowKey& key);
    double retryDelay(const UnitFlow& flow, int bytes) const;
    double stopTime(const SourceSpec& s) const {
        return s.stop < 0 ? sc_.duration : s.stop;
    }

    Scenario sc_;
    Topology topo_;
    double now_ = 0.0;
    uint64_t evSeq_ = 0;
    std::priority_queue<Event, std::vector<Event>, EventCmp> queue_;

    std::vector<SwitchPort> ports_;  // indexed by channel
    std::vector<bool> portBusy_;
    std::vector<uint64_t> carriedBytes_;
    std::vector<uint64_t> lastCarriedBytes_;

    std::vector<HostAgent> hosts_;
    Coordinator coord_;

    std::vector<std::unique_ptr<SourceState>> sources_;
    std::map<uint64_t, SourceState*> srcById_;

    std::map<FlowKey, FlowStat> flowStats_;
    std::map<int, uint64_t> tenantDelivered_;
    std::map<int, uint64_t> tenantLastDelivered_;

    MetricsLog log_;
    uint64_t nextPktId_ = 1;
    uint64_t nextSourceId_ = 1;
};

// Convenience: parse nothing, just run.
MetricsLog run_scenario(const Scenario& sc);

}  // namespace pronet
