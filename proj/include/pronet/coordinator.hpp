#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pronet/host_agent.hpp"

namespace pronet {

struct UsageReportMsg {
    int hostId;
    uint64_t seq;  // report-cycle counter at the host
    std::vector<TenantShare> entries;
};

struct TargetUpdateMsg {
    int hostId;
    std::vector<TenantShare> entries;
};

// Raw balancing arithmetic: output_i = Avg*(1+alpha) - (s_i - Avg),
// before the zero floor. Exposed for property testing.
std::vector<double> balance_shares(const std::vector<double>& inputs,
                                   double alpha);

struct CoordinatorTraceRow {
    uint64_t windowId;
    int tenantId;
    int hostId;
    double inputFS;
    double targetFS;
};

enum class BalancingScope {
    PerTenant,  // one InputArray per tenant across hosts
    Global,     // all (tenant, host) shares pooled into one array
};

struct CoordinatorConfig {
    double alpha = 0.10;
    BalancingScope scope = BalancingScope::PerTenant;
};

// Network-wide fair-share balancer. Reports accumulate into the open
// window; close_window() emits per-host targets and advances the window.
class Coordinator {
public:
    explicit Coordinator(const CoordinatorConfig& cfg) : cfg_(cfg) {}

    // At most one report per host per window; late reports join the open
    // window, reports for future windows wait for it.
    void collect(const UsageReportMsg& report);

    std::vector<TargetUpdateMsg> closeWindow();

    uint64_t windowId() const { return windowId_; }
    const std::vector<CoordinatorTraceRow>& trace() const { return trace_; }

private:
    CoordinatorConfig cfg_;
    uint64_t windowId_ = 0;
    std::map<int, UsageReportMsg> received_;  // hostId -> report
    std::vector<UsageReportMsg> pending_;     // future-window reports
    std::vector<CoordinatorTraceRow> trace_;
};

}  // namespace pronet
