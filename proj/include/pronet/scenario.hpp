#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pronet/bf.hpp"
#include "pronet/coordinator.hpp"
#include "pronet/topology.hpp"

namespace pronet {

struct TopologySpec {
    std::string kind = "dumbbell";  // dumbbell | fattree | explicit
    // dumbbell
    int senders = 2;
    int receivers = 1;
    double bottleneckBps = 1e9;
    double edgeBps = 2e9;
    // fattree
    int k = 4;
    double linkBps = 1e9;
    // explicit
    int hosts = 0;
    int switches = 0;
    struct LinkSpec {
        int a, b;
        double capacityBps;
        double delay;
    };
    std::vector<LinkSpec> links;
    double delay = 5e-6;
};

struct TenantSpec {
    int id = 0;
    double weight = 1.0;
    std::optional<std::vector<BfPoint>> bf;  // explicit tenant BF
    double minGuarantee = 0.0;               // bits/s
    double maxBw = 0.0;                      // cap of the default BF; 0 = auto
};

struct SourceSpec {
    std::string kind = "cbr";  // cbr | aimd | poisson
    int tenant = 0;
    int src = 0;
    int dst = 0;
    double rateBps = 1e9;  // cbr offered rate
    double start = 0.0;
    double stop = -1.0;       // -1 = run to scenario end
    uint64_t flowSizeBytes = 0;  // aimd/poisson: 0 = long-lived
    double meanInterarrival = 0.01;  // poisson
    int count = 0;                   // poisson: number of flows (0 = unlimited)
};

struct CawcSpec {
    double slidingTime = 10e-6;
    double threshold = 0.2;
    int checkPeriodPackets = 50;
};

struct TenantCounterSpec {
    bool enabled = false;
    double th = 0.1;
};

struct EcnSpec {
    long long minBytes = 50000;
    long long maxBytes = 200000;
};

struct PronetSpec {
    bool enabled = true;
    double reportCycle = 0.01;
    double rateControlCycle = 0.001;  // reportCycle / 10
    double alpha = 0.10;
    double k = 1.0;
    double minFairShare = 0.01;
    double fairShareUnit = 1e9;
    double deviceRateLimit = 0.0;  // 0 = auto (max attached link capacity)
    double startingRate = 1e8;
    double controlDelay = 0.0;  // host<->coordinator channel delay
    std::string coordinatorScope = "global";  // global | perTenant
    CawcSpec cawc;
    TenantCounterSpec tenantCounter;
    EcnSpec ecn;
    long long bufferLimitBytes = 400000;
};

struct ExpectSpec {
    std::string kind;
    std::string raw;  // JSON object text, interpreted by the checker
};

struct Scenario {
    std::string name = "scenario";
    TopologySpec topology;
    std::vector<TenantSpec> tenants;
    std::vector<SourceSpec> sources;
    PronetSpec pronet;
    double duration = 1.0;
    uint64_t seed = 1;
    double sampling = 0.01;
    std::vector<ExpectSpec> expects;
};

// Parses and validates; throws std::runtime_error with a path into the
// document on bad input.
Scenario parse_scenario(const std::string& jsonText);
Scenario load_scenario_file(const std::string& path);

// Applies a "dotted.path=value" override onto the raw JSON before parsing.
std::string apply_overrides(const std::string& jsonText,
                            const std::vector<std::string>& overrides);

Topology build_topology(const TopologySpec& spec);

// The tenant's BF: explicit breakpoints if given, else linear with slope
// weight * fairShareUnit from the guarantee up to maxBw.
BandwidthFunction tenant_bf(const TenantSpec& t, const PronetSpec& p,
                            double autoMaxBw);

}  // namespace pronet
