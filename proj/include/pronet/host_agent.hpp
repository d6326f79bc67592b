#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "pronet/bf.hpp"

namespace pronet {

class TokenBucket {
public:
    TokenBucket(double rateBps, double burstBytes)
        : rate_(rateBps), burst_(burstBytes), tokens_(burstBytes) {}

    // Refill, then admit iff enough tokens. Deny leaves the (refilled)
    // token count untouched.
    bool trySend(int pktBytes, double now);

    void setRate(double rateBps, double now) {
        refill(now);
        rate_ = rateBps;
    }
    double rate() const { return rate_; }
    double tokens() const { return tokens_; }
    double burst() const { return burst_; }

private:
    void refill(double now);
    double rate_;
    double burst_;
    double tokens_;
    double lastRefill_ = 0.0;
};

struct CongestionCheck {
    bool signal = false;
    bool interTenant = false;
};

// Receiver-side scoreboard: byte-weighted ECN ratio over a sliding window,
// evaluated every checkPeriodPackets received packets.
class CawcScoreboard {
public:
    CawcScoreboard(double slidingTime, double threshold, int checkPeriodPackets)
        : slidingTime_(slidingTime), threshold_(threshold),
          checkPeriod_(checkPeriodPackets) {}

    CongestionCheck onPacket(int bytes, bool ecnMarked, bool interTenant,
                             double now);

private:
    struct Rec {
        double ts;
        int bytes;
        bool ecn;
        bool inter;
    };
    double slidingTime_;
    double threshold_;
    int checkPeriod_;
    int sinceCheck_ = 0;
    std::deque<Rec> window_;
};

struct FlowKey {
    int tenantId;
    int srcHost;
    int dstHost;
    auto operator<=>(const FlowKey&) const = default;
};

struct UnitFlow {
    int id;
    FlowKey key;
    BandwidthFunction originalBf;  // as initialized at classification, fixed
    BandwidthFunction bf;          // working (aggregated) BF
    TokenBucket bucket;
    double fairShare;            // oldFS, on the tenant fair-share axis
    double allocatedRate;        // bits/s; meaningless while non-competitive
    uint64_t bytesThisReportCycle = 0;   // the byte-counter
    uint64_t bytesThisControlCycle = 0;  // activity detection
    double lastUsageFS = 0.0;  // fair share actually used in the last report
    bool active = true;
    bool congestedPrev = false;
    bool congestedThis = false;
    bool competitive = false;  // false = non-competitive pool, uncapped
};

struct HostConfig {
    double deviceRateLimit = 1e9;   // bits/s
    double reportCycle = 0.01;      // s
    double rateControlCycle = 0.001;  // s
    double k = 1.0;                 // fair-share attenuation when congested
    double minFairShare = 0.01;
    double startingRate = 1e8;      // bits/s, initial fair-share seed
    double fairShareUnit = 1e9;     // bits/s per (weight x fair share)
    double burstBytes = 2250;       // 1.5 x MTU
    double cawcSlidingTime = 10e-6;
    double cawcThreshold = 0.2;
    int cawcCheckPeriodPackets = 50;
};

struct TenantLocalConfig {
    double weight = 1.0;
    BandwidthFunction bf = BandwidthFunction({{0.0, 0.0}, {1.0, 1e9}});
    double minGuarantee = 0.0;  // bits/s, encoded into new flows' BFs
};

struct TenantShare {
    int tenantId;
    double fairShare;
};

// Per-host sender/receiver agent: unit-flow table, tenant controllers,
// token-bucket pacing, the distributed rate adaptation algorithm, and the
// CAWC receiver scoreboards.
class HostAgent {
public:
    HostAgent(int hostId, const HostConfig& cfg) : hostId_(hostId), cfg_(cfg) {}

    void registerTenant(int tenantId, TenantLocalConfig tcfg);
    bool hasTenant(int tenantId) const { return tenants_.count(tenantId) > 0; }

    // Sender side ------------------------------------------------------

    // Existing unit-flow for the key, or a new one with a freshly
    // initialized bandwidth function and seeded fair share.
    UnitFlow& classify(const FlowKey& key);
    UnitFlow* find(const FlowKey& key);

    // Token-bucket admission; counts admitted bytes. Non-competitive
    // flows bypass the bucket.
    bool tryAdmit(UnitFlow& flow, int pktBytes, double now);

    // Re-aggregate member flows' original BFs with each tenant's BF.
    void tenantRefresh();

    // Per-tenant measured fair shares; resets byte-counters.
    std::vector<TenantShare> reportUsage(double now);

    void setTargets(const std::vector<TenantShare>& targets);

    // One rate-control cycle: compensation toward the coordinator target,
    // growth when uncongested, attenuation under sustained congestion.
    void rateAdaptationCycle(double now);

    void onCongestionSignal(const FlowKey& key, bool interTenant);

    // Receiver side ----------------------------------------------------
    CongestionCheck onDataReceived(const FlowKey& key, int bytes,
                                   bool ecnMarked, bool interTenant,
                                   double now);

    // Introspection ----------------------------------------------------
    int hostId() const { return hostId_; }
    const HostConfig& config() const { return cfg_; }
    const std::map<FlowKey, UnitFlow>& flows() const { return flows_; }
    double targetFor(int tenantId) const;

private:
    int hostId_;
    HostConfig cfg_;
    std::map<int, TenantLocalConfig> tenants_;
    std::map<int, double> targets_;  // latest TargetUpdate per tenant
    std::map<FlowKey, UnitFlow> flows_;
    std::map<FlowKey, CawcScoreboard> scoreboards_;
    int nextFlowId_ = 0;
};

}  // namespace pronet
