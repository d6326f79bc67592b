#include "pronet/simulation.hpp"

#include <algorithm>
#include <cmath>

namespace pronet {

namespace {
constexpr int kMtu = 1500;
constexpr int kCtrlBytes = 64;
constexpr double kRto = 0.010;
constexpr double kEps = 1e-12;
}  // namespace

Simulation::Simulation(const Scenario& sc)
    : sc_(sc), topo_(build_topology(sc.topology)),
      coord_(CoordinatorConfig{sc.pronet.alpha,
                               sc.pronet.coordinatorScope == "perTenant"
                                   ? BalancingScope::PerTenant
                                   : BalancingScope::Global}) {
    // ports: switch egress gets the scenario's ECN/tenant-counter config,
    // host egress is a plain deep FIFO
    for (size_t i = 0; i < topo_.channels.size(); ++i) {
        const Channel& c = topo_.channels[i];
        SwitchPortConfig pc;
        pc.capacityBps = c.capacityBps;
        if (topo_.isHost(c.from)) {
            pc.bufferLimitBytes = 4'000'000;
            pc.ecnMinBytes = pc.bufferLimitBytes;
            pc.ecnMaxBytes = pc.bufferLimitBytes + 1;
            pc.tenantCounterEnabled = false;
        } else {
            pc.bufferLimitBytes = sc_.pronet.bufferLimitBytes;
            pc.ecnMinBytes = sc_.pronet.ecn.minBytes;
            pc.ecnMaxBytes = sc_.pronet.ecn.maxBytes;
            pc.tenantCounterEnabled = sc_.pronet.tenantCounter.enabled;
            pc.tenantCounterTH = sc_.pronet.tenantCounter.th;
        }
        ports_.emplace_back(pc, sc_.seed * 0x9e3779b9ull + i);
    }
    portBusy_.assign(topo_.channels.size(), false);
    carriedBytes_.assign(topo_.channels.size(), 0);
    lastCarriedBytes_.assign(topo_.channels.size(), 0);

    for (int h = 0; h < topo_.nHosts; ++h) {
        HostConfig hc;
        double maxUp = 0;
        for (const Channel& c : topo_.channels)
            if (c.from == h) maxUp = std::max(maxUp, c.capacityBps);
        hc.deviceRateLimit =
            sc_.pronet.deviceRateLimit > 0 ? sc_.pronet.deviceRateLimit : maxUp;
        hc.reportCycle = sc_.pronet.reportCycle;
        hc.rateControlCycle = sc_.pronet.rateControlCycle;
        hc.k = sc_.pronet.k;
        hc.minFairShare = sc_.pronet.minFairShare;
        hc.startingRate = sc_.pronet.startingRate;
        hc.fairShareUnit = sc_.pronet.fairShareUnit;
        hc.cawcSlidingTime = sc_.pronet.cawc.slidingTime;
        hc.cawcThreshold = sc_.pronet.cawc.threshold;
        hc.cawcCheckPeriodPackets = sc_.pronet.cawc.checkPeriodPackets;
        hosts_.emplace_back(h, hc);
        for (const TenantSpec& t : sc_.tenants) {
            TenantLocalConfig tc;
            tc.weight = t.weight;
            tc.minGuarantee = t.minGuarantee;
            tc.bf = tenant_bf(t, sc_.pronet, hc.deviceRateLimit);
            hosts_.back().registerTenant(t.id, tc);
        }
    }
}

void Simulation::schedule(double t, std::function<void()> fn) {
    queue_.push({t, evSeq_++, std::move(fn)});
}

Simulation::FlowStat& Simulation::flowStat(const FlowKey& key) {
    auto it = flowStats_.find(key);
    if (it != flowStats_.end()) return it->second;
    FlowStat st;
    st.id = "f" + std::to_string(key.tenantId) + "_" +
            std::to_string(key.srcHost) + "_" + std::to_string(key.dstHost);
    return flowStats_.emplace(key, std::move(st)).first->second;
}

double Simulation::retryDelay(const UnitFlow& flow, int bytes) const {
    double deficit = std::max(0.0, bytes - flow.bucket.tokens());
    double rate = std::max(flow.bucket.rate(), 1e5);
    return std::clamp(deficit * 8.0 / rate, 1e-6, 5e-3);
}

void Simulation::injectFromHost(Packet pkt, int host) {
    if (pkt.dstHost == host) return;  // degenerate
    forward(pkt, host);
}

void Simulation::forward(Packet pkt, int node) {
    int nh = topo_.nextHop(
        node, pkt.dstHost,
        flow_hash(pkt.tenantId, pkt.srcHost, pkt.dstHost, sc_.seed));
    int ch = topo_.channelIndex(node, nh);
    bool ok = ports_[ch].enqueue(pkt, now_);
    if (!ok) {
        if (pkt.kind == PacketKind::Data)
            flowStat({pkt.tenantId, pkt.srcHost, pkt.dstHost}).drops += 1;
        return;
    }
    if (!portBusy_[ch]) kick(ch);
}

void Simulation::kick(int ch) {
    if (portBusy_[ch] || ports_[ch].empty()) return;
    Packet pkt = ports_[ch].dequeue();
    portBusy_[ch] = true;
    const Channel& c = topo_.channels[ch];
    double ser = pkt.sizeBytes * 8.0 / c.capacityBps;
    schedule(now_ + ser, [this, ch, bytes = pkt.sizeBytes] {
        carriedBytes_[ch] += bytes;
        portBusy_[ch] = false;
        kick(ch);
    });
    schedule(now_ + ser + c.delay, [this, pkt, to = c.to] { arrive(pkt, to); });
}

void Simulation::arrive(Packet pkt, int node) {
    if (node != pkt.dstHost) {
        forward(pkt, node);
        return;
    }
    switch (pkt.kind) {
        case PacketKind::Data:
            deliverData(pkt, node);
            break;
        case PacketKind::Ack: {
            auto it = srcById_.find(pkt.sourceId);
            if (it != srcById_.end()) aimdOnAck(*it->second, pkt);
            break;
        }
        case PacketKind::CongestionSignal:
            hosts_[node].onCongestionSignal(
                {pkt.tenantId, pkt.dstHost, pkt.srcHost}, pkt.signalInterTenant);
            break;
        default:
            break;
    }
}

void Simulation::deliverData(Packet& pkt, int node) {
    FlowKey key{pkt.tenantId, pkt.srcHost, pkt.dstHost};
    FlowStat& st = flowStat(key);
    st.delivered += pkt.sizeBytes;
    tenantDelivered_[pkt.tenantId] += pkt.sizeBytes;

    if (sc_.pronet.enabled) {
        CongestionCheck c = hosts_[node].onDataReceived(
            key, pkt.sizeBytes, pkt.ecnMarked, pkt.interTenant, now_);
        // without the tenant-counter the switch gives no intra/inter hint;
        // the host must assume inter-tenant congestion
        bool inter = sc_.pronet.tenantCounter.enabled ? c.interTenant : true;
        if (c.signal) {
            Packet sig;
            sig.id = nextPktId_++;
            sig.kind = PacketKind::CongestionSignal;
            sig.tenantId = pkt.tenantId;
            sig.srcHost = node;
            sig.dstHost = pkt.srcHost;
            sig.sizeBytes = kCtrlBytes;
            sig.signalInterTenant = inter;
            injectFromHost(sig, node);
        }
    }

    // per-packet ack for window-controlled sources
    auto it = srcById_.find(pkt.sourceId);
    if (it != srcById_.end() && it->second->spec.kind != "cbr") {
        Packet ack;
        ack.id = nextPktId_++;
        ack.kind = PacketKind::Ack;
        ack.tenantId = pkt.tenantId;
        ack.srcHost = node;
        ack.dstHost = pkt.srcHost;
        ack.sizeBytes = kCtrlBytes;
        ack.seq = pkt.seq;
        ack.sourceId = pkt.sourceId;
        ack.ecnEcho = pkt.ecnMarked;
        ack.sendTime = pkt.sendTime;
        injectFromHost(ack, node);
    }
}

// ---- sources ------------------------------------------------------------

void Simulation::cbrGenerate(SourceState& s) {
    if (now_ >= stopTime(s.spec) - kEps) return;
    if (s.backlog.size() < 256) {
        Packet p;
        p.id = nextPktId_++;
        p.tenantId = s.spec.tenant;
        p.srcHost = s.spec.src;
        p.dstHost = s.spec.dst;
        p.sizeBytes = kMtu;
        p.sourceId = s.id;
        s.backlog.push_back(p);
        if (!s.pumpScheduled) {
            s.pumpScheduled = true;
            schedule(now_, [this, &s] { cbrPump(s); });
        }
    } else {
        flowStat(s.key).drops += 1;  // source backlog overflow
    }
    // +/-2% spacing jitter breaks the phase lock between same-rate sources
    // that deterministic event ordering would otherwise turn into systematic
    // drop bias at a full queue
    double jitter =
        std::uniform_real_distribution<double>(0.98, 1.02)(s.rng);
    double next = now_ + jitter * kMtu * 8.0 / s.spec.rateBps;
    if (next < stopTime(s.spec))
        schedule(next, [this, &s] { cbrGenerate(s); });
}

void Simulation::cbrPump(SourceState& s) {
    s.pumpScheduled = false;
    UnitFlow& flow = hosts_[s.spec.src].classify(s.key);
    while (!s.backlog.empty()) {
        if (!hosts_[s.spec.src].tryAdmit(flow, kMtu, now_)) {
            s.pumpScheduled = true;
            schedule(now_ + retryDelay(flow, kMtu), [this, &s] { cbrPump(s); });
            return;
        }
        Packet p = s.backlog.front();
        s.backlog.pop_front();
        p.sendTime = now_;
        injectFromHost(p, s.spec.src);
    }
}

void Simulation::aimdSendLoop(SourceState& s) {
    s.sendLoopScheduled = false;
    if (s.done) return;
    if (s.totalPackets == 0 && now_ >= stopTime(s.spec) - kEps) return;
    UnitFlow& flow = hosts_[s.spec.src].classify(s.key);
    while (double(s.nextSeq) < double(s.lastAcked) + s.cwnd &&
           (s.totalPackets == 0 || s.nextSeq < s.totalPackets)) {
        if (!hosts_[s.spec.src].tryAdmit(flow, kMtu, now_)) {
            if (!s.sendLoopScheduled) {
                s.sendLoopScheduled = true;
                schedule(now_ + retryDelay(flow, kMtu),
                         [this, &s] { aimdSendLoop(s); });
            }
            return;
        }
        Packet p;
        p.id = nextPktId_++;
        p.tenantId = s.spec.tenant;
        p.srcHost = s.spec.src;
        p.dstHost = s.spec.dst;
        p.sizeBytes = kMtu;
        p.seq = s.nextSeq++;
        p.sourceId = s.id;
        p.sendTime = now_;
        injectFromHost(p, s.spec.src);
    }
}

void Simulation::aimdOnAck(SourceState& s, const Packet& ack) {
    if (s.done) return;
    double rtt = now_ - ack.sendTime;
    s.srtt = 0.875 * s.srtt + 0.125 * rtt;
    if (ack.seq + 1 > s.lastAcked) {
        s.lastAcked = ack.seq + 1;
        s.cwnd += 1.0 / s.cwnd;
    }
    if (ack.ecnEcho && now_ - s.lastDecrease > s.srtt) {
        s.cwnd = std::max(1.0, s.cwnd / 2.0);
        s.lastDecrease = now_;
    }
    if (s.totalPackets > 0 && s.lastAcked >= s.totalPackets) {
        s.done = true;
        log_.fct.push_back({s.id, s.spec.tenant, s.totalPackets * uint64_t(kMtu),
                            s.startedAt, now_});
        return;
    }
    aimdSendLoop(s);
}

void Simulation::aimdRtoCheck(SourceState& s) {
    if (s.done) return;
    if (s.lastAcked == s.ackedAtLastRtoCheck && s.nextSeq > s.lastAcked) {
        s.nextSeq = s.lastAcked;  // go-back-N
        s.cwnd = 1.0;
        aimdSendLoop(s);
    }
    s.ackedAtLastRtoCheck = s.lastAcked;
    double next = now_ + kRto;
    if (next <= sc_.duration)
        schedule(next, [this, &s] { aimdRtoCheck(s); });
}

Simulation::SourceState& Simulation::newAimdFlow(const SourceSpec& spec,
                                                 double start) {
    auto s = std::make_unique<SourceState>();
    s->spec = spec;
    s->id = nextSourceId_++;
    s->key = {spec.tenant, spec.src, spec.dst};
    s->totalPackets =
        spec.flowSizeBytes > 0 ? (spec.flowSizeBytes + kMtu - 1) / kMtu : 0;
    s->startedAt = start;
    SourceState& ref = *s;
    sources_.push_back(std::move(s));
    srcById_[ref.id] = &ref;
    schedule(start, [this, &ref] { aimdSendLoop(ref); });
    schedule(start + kRto, [this, &ref] { aimdRtoCheck(ref); });
    return ref;
}

void Simulation::poissonSpawn(SourceState& s) {
    if (now_ >= stopTime(s.spec) - kEps) return;
    if (s.spec.count > 0 && s.spawned >= s.spec.count) return;
    SourceSpec child = s.spec;
    child.kind = "aimd";
    newAimdFlow(child, now_);
    s.spawned += 1;
    std::exponential_distribution<double> exp(1.0 / s.spec.meanInterarrival);
    double next = now_ + exp(s.rng);
    if (next < stopTime(s.spec))
        schedule(next, [this, &s] { poissonSpawn(s); });
}

// ---- control plane ------------------------------------------------------

void Simulation::hostReport(int host, uint64_t seqNo) {
    hosts_[host].tenantRefresh();
    auto entries = hosts_[host].reportUsage(now_);
    if (!entries.empty()) {
        UsageReportMsg msg{host, seqNo, std::move(entries)};
        schedule(now_ + sc_.pronet.controlDelay,
                 [this, msg] { coord_.collect(msg); });
    }
    double next = now_ + sc_.pronet.reportCycle;
    if (next <= sc_.duration)
        schedule(next, [this, host, seqNo] { hostReport(host, seqNo + 1); });
}

void Simulation::rateTick(int host) {
    hosts_[host].rateAdaptationCycle(now_);
    double next = now_ + sc_.pronet.rateControlCycle;
    if (next <= sc_.duration) schedule(next, [this, host] { rateTick(host); });
}

void Simulation::coordinatorClose() {
    auto updates = coord_.closeWindow();
    for (const auto& u : updates) {
        schedule(now_ + sc_.pronet.controlDelay,
                 [this, u] { hosts_[u.hostId].setTargets(u.entries); });
    }
    double next = now_ + sc_.pronet.reportCycle;
    if (next <= sc_.duration) schedule(next, [this] { coordinatorClose(); });
}

// ---- metrics ------------------------------------------------------------

void Simulation::sample(int index) {
    double t = index * sc_.sampling;
    for (auto& [key, st] : flowStats_) {
        double thpt = (st.delivered - st.lastDelivered) * 8.0 / sc_.sampling;
        st.lastDelivered = st.delivered;
        log_.rows.push_back({t, "flow", st.id, thpt, st.delivered, st.drops});
    }
    for (const TenantSpec& ts : sc_.tenants) {
        uint64_t cur = tenantDelivered_[ts.id];
        uint64_t last = tenantLastDelivered_[ts.id];
        tenantLastDelivered_[ts.id] = cur;
        log_.rows.push_back({t, "tenant", std::to_string(ts.id),
                             (cur - last) * 8.0 / sc_.sampling, cur, 0});
    }
    for (size_t ch = 0; ch < topo_.channels.size(); ++ch) {
        const Channel& c = topo_.channels[ch];
        uint64_t cur = carriedBytes_[ch];
        double thpt = (cur - lastCarriedBytes_[ch]) * 8.0 / sc_.sampling;
        lastCarriedBytes_[ch] = cur;
        log_.rows.push_back({t,
                             "link",
                             std::to_string(c.from) + "->" + std::to_string(c.to),
                             thpt, cur, ports_[ch].counters().droppedPackets});
    }
    double next = (index + 1) * sc_.sampling;
    if (next <= sc_.duration + kEps)
        schedule(next, [this, index] { sample(index + 1); });
}

// ---- top level ----------------------------------------------------------

MetricsLog Simulation::run() {
    log_.samplingInterval = sc_.sampling;
    for (const Channel& c : topo_.channels)
        log_.linkCapacity[std::to_string(c.from) + "->" + std::to_string(c.to)] =
            c.capacityBps;

    for (const SourceSpec& spec : sc_.sources) {
        if (spec.kind == "cbr") {
            auto s = std::make_unique<SourceState>();
            s->spec = spec;
            s->id = nextSourceId_++;
            s->key = {spec.tenant, spec.src, spec.dst};
            s->rng.seed(sc_.seed * 0x2545F4914F6CDD1Dull + s->id);
            SourceState& ref = *s;
            sources_.push_back(std::move(s));
            srcById_[ref.id] = &ref;
            schedule(spec.start, [this, &ref] { cbrGenerate(ref); });
        } else if (spec.kind == "aimd") {
            newAimdFlow(spec, spec.start);
        } else {  // poisson
            auto s = std::make_unique<SourceState>();
            s->spec = spec;
            s->id = nextSourceId_++;
            s->key = {spec.tenant, spec.src, spec.dst};
            s->rng.seed(sc_.seed * 0x2545F4914F6CDD1Dull + s->id);
            SourceState& ref = *s;
            sources_.push_back(std::move(s));
            srcById_[ref.id] = &ref;
            schedule(spec.start, [this, &ref] { poissonSpawn(ref); });
        }
    }

    if (sc_.pronet.enabled) {
        double rc = sc_.pronet.reportCycle;
        for (int h = 0; h < topo_.nHosts; ++h) {
            schedule(rc, [this, h] { hostReport(h, 0); });
            schedule(sc_.pronet.rateControlCycle, [this, h] { rateTick(h); });
        }
        schedule(rc + rc / 2.0, [this] { coordinatorClose(); });
    }

    schedule(sc_.sampling, [this] { sample(1); });

    while (!queue_.empty()) {
        Event ev = queue_.top();
        if (ev.time > sc_.duration + 1e-9) break;
        queue_.pop();
        now_ = ev.time;
        ev.fn();
    }

    log_.coordinator = coord_.trace();
    for (const auto& [key, st] : flowStats_)
        log_.flows.push_back({st.id, key.tenantId, key.srcHost, key.dstHost});
    return log_;
}

MetricsLog run_scenario(const Scenario& sc) {
    Simulation sim(sc);
    return sim.run();
}

}  // namespace pronet
