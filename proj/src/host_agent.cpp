#include "pronet/host_agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pronet {

void TokenBucket::refill(double now) {
    if (now > lastRefill_) {
        tokens_ = std::min(burst_, tokens_ + rate_ * (now - lastRefill_) / 8.0);
        lastRefill_ = now;
    }
}

bool TokenBucket::trySend(int pktBytes, double now) {
    if (pktBytes > burst_) throw std::invalid_argument("packet exceeds burst");
    refill(now);
    if (tokens_ >= pktBytes) {
        tokens_ -= pktBytes;
        return true;
    }
    return false;
}

CongestionCheck CawcScoreboard::onPacket(int bytes, bool ecnMarked,
                                         bool interTenant, double now) {
    window_.push_back({now, bytes, ecnMarked, interTenant});
    while (!window_.empty() && window_.front().ts < now - slidingTime_)
        window_.pop_front();
    if (++sinceCheck_ < checkPeriod_) return {};
    sinceCheck_ = 0;
    double total = 0, marked = 0;
    bool inter = false;
    for (const auto& r : window_) {
        total += r.bytes;
        if (r.ecn) {
            marked += r.bytes;
            inter = inter || r.inter;
        }
    }
    if (total <= 0 || marked / total <= threshold_) return {};
    return {true, inter};
}

void HostAgent::registerTenant(int tenantId, TenantLocalConfig tcfg) {
    tenants_.insert_or_assign(tenantId, std::move(tcfg));
}

UnitFlow& HostAgent::classify(const FlowKey& key) {
    auto it = flows_.find(key);
    if (it != flows_.end()) return it->second;
    auto tit = tenants_.find(key.tenantId);
    if (tit == tenants_.end())
        throw std::invalid_argument("flow for unregistered tenant");
    const TenantLocalConfig& t = tit->second;
    BandwidthFunction bf = bf_init_flow(t.weight, t.weight, cfg_.deviceRateLimit,
                                        cfg_.fairShareUnit, t.minGuarantee);
    double fs = bf.inverse(std::min(cfg_.startingRate, bf.maxBandwidth()));
    UnitFlow flow{nextFlowId_++, key,           bf,
                  bf,            TokenBucket(cfg_.startingRate, cfg_.burstBytes),
                  fs,            cfg_.startingRate};
    flow.lastUsageFS = fs;
    return flows_.emplace(key, std::move(flow)).first->second;
}

UnitFlow* HostAgent::find(const FlowKey& key) {
    auto it = flows_.find(key);
    return it == flows_.end() ? nullptr : &it->second;
}

bool HostAgent::tryAdmit(UnitFlow& flow, int pktBytes, double now) {
    if (!flow.active) {  // revival after an inactive spell
        flow.active = true;
        flow.fairShare = std::max(flow.fairShare, cfg_.minFairShare);
    }
    if (flow.competitive && !flow.bucket.trySend(pktBytes, now)) return false;
    flow.bytesThisReportCycle += pktBytes;
    flow.bytesThisControlCycle += pktBytes;
    return true;
}

void HostAgent::tenantRefresh() {
    for (auto& [tenantId, tcfg] : tenants_) {
        std::vector<BandwidthFunction> originals;
        std::vector<UnitFlow*> members;
        for (auto& [key, flow] : flows_) {
            if (key.tenantId != tenantId) continue;
            // inactive flows keep their last BF but do not take a slice of
            // the tenant BF, so the active ones can fill the tenant's share
            if (!flow.active) continue;
            originals.push_back(flow.originalBf);
            members.push_back(&flow);
        }
        if (members.empty()) continue;
        auto aggregated = bf_aggregate(originals, tcfg.bf);
        for (size_t i = 0; i < members.size(); ++i)
            members[i]->bf = aggregated[i];
    }
}

std::vector<TenantShare> HostAgent::reportUsage(double now) {
    (void)now;
    std::vector<TenantShare> out;
    for (auto& [tenantId, tcfg] : tenants_) {
        uint64_t bytes = 0;
        for (auto& [key, flow] : flows_) {
            if (key.tenantId != tenantId) continue;
            double flowBw = double(flow.bytesThisReportCycle) * 8.0 / cfg_.reportCycle;
            flow.lastUsageFS =
                flow.bf.inverse(std::min(flowBw, flow.bf.maxBandwidth()));
            bytes += flow.bytesThisReportCycle;
            flow.bytesThisReportCycle = 0;
        }
        // idle tenants drop out of the report: a zero entry would drag the
        // balanced average down and starve the remaining senders
        if (bytes == 0) continue;
        double avgBw = double(bytes) * 8.0 / cfg_.reportCycle;
        double fs = tcfg.bf.inverse(std::min(avgBw, tcfg.bf.maxBandwidth()));
        out.push_back({tenantId, fs});
    }
    return out;
}

void HostAgent::setTargets(const std::vector<TenantShare>& targets) {
    for (const auto& t : targets) targets_[t.tenantId] = t.fairShare;
}

double HostAgent::targetFor(int tenantId) const {
    auto it = targets_.find(tenantId);
    return it == targets_.end() ? -1.0 : it->second;
}

void HostAgent::rateAdaptationCycle(double now) {
    std::vector<UnitFlow*> capped;
    std::vector<double> pendingBw;
    double rateSum = 0.0;
    for (auto& [key, flow] : flows_) {
        bool sent = flow.bytesThisControlCycle > 0;
        flow.bytesThisControlCycle = 0;
        bool congested = flow.congestedThis;
        bool congestedPrev = flow.congestedPrev;
        flow.congestedPrev = congested;
        flow.congestedThis = false;
        if (!sent) {
            flow.active = false;
            continue;
        }
        flow.active = true;
        double oldFS = flow.fairShare;
        double target = targetFor(key.tenantId);
        // compensation toward the coordinator target, anchored between the
        // usage the coordinator actually saw and the target itself: an
        // over-user is held at the target for the whole window, while a fair
        // share that already moved past the target on its own (work-conserving
        // growth, or a transport that cannot fill its allocation) is outside
        // the band and needs no push
        if (target >= 0) {
            double lo = std::min(flow.lastUsageFS, target);
            double hi = std::max(flow.lastUsageFS, target);
            double anchor = std::clamp(oldFS, lo, hi);
            if (anchor != target)
                oldFS += solve_compensation(flow.bf, anchor, target);
        }
        if (!flow.competitive) {  // uncapped pool: track share, skip pacing
            flow.fairShare = std::max(oldFS, cfg_.minFairShare);
            continue;
        }
        double newFS;
        if (congested)
            newFS = congestedPrev ? oldFS - cfg_.k : oldFS;
        else
            newFS = oldFS * (1.0 + cfg_.rateControlCycle / cfg_.reportCycle);
        newFS = std::max(newFS, cfg_.minFairShare);
        flow.fairShare = newFS;
        double nBW = flow.bf.eval(newFS);
        rateSum += nBW;
        capped.push_back(&flow);
        pendingBw.push_back(nBW);
    }
    double scaling =
        rateSum >= cfg_.deviceRateLimit ? cfg_.deviceRateLimit / rateSum : 1.0;
    for (size_t i = 0; i < capped.size(); ++i) {
        capped[i]->allocatedRate = pendingBw[i] * scaling;
        capped[i]->bucket.setRate(capped[i]->allocatedRate, now);
    }
}

void HostAgent::onCongestionSignal(const FlowKey& key, bool interTenant) {
    auto it = flows_.find(key);
    if (it == flows_.end()) return;
    UnitFlow& flow = it->second;
    if (interTenant) {
        flow.competitive = true;
        flow.congestedThis = true;
    } else if (flow.competitive) {
        flow.congestedThis = true;
    }
    // intra-tenant congestion on a non-competitive flow is left to the
    // transport's congestion control
}

CongestionCheck HostAgent::onDataReceived(const FlowKey& key, int bytes,
                                          bool ecnMarked, bool interTenant,
                                          double now) {
    auto it = scoreboards_.find(key);
    if (it == scoreboards_.end())
        it = scoreboards_
                 .emplace(key, CawcScoreboard(cfg_.cawcSlidingTime,
                                              cfg_.cawcThreshold,
                                              cfg_.cawcCheckPeriodPackets))
                 .first;
    return it->second.onPacket(bytes, ecnMarked, interTenant, now);
}

}  // namespace pronet
