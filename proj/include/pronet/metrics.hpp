#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pronet/coordinator.hpp"

namespace pronet {

struct MetricRow {
    double time;        // end of the sampling interval
    std::string scope;  // flow | tenant | link
    std::string id;
    double throughputBps;
    uint64_t bytes;  // cumulative delivered (flow/tenant) or carried (link)
    uint64_t drops;  // cumulative
};

struct FctRow {
    uint64_t flowId;
    int tenantId;
    uint64_t sizeBytes;
    double start;
    double finish;
};

struct FlowInfo {
    std::string id;  // metric row id
    int tenantId;
    int src;
    int dst;
};

struct MetricsLog {
    double samplingInterval = 0.01;
    std::vector<MetricRow> rows;
    std::vector<FctRow> fct;
    std::vector<CoordinatorTraceRow> coordinator;
    std::vector<FlowInfo> flows;
    std::map<std::string, double> linkCapacity;  // id -> bits/s

    // Sampled throughputs with t0 < sample time <= t1.
    std::vector<double> series(const std::string& scope, const std::string& id,
                               double t0, double t1) const;
    double seriesAvg(const std::string& scope, const std::string& id, double t0,
                     double t1) const;

    std::string metricsCsv() const;
    std::string fctCsv() const;
    std::string coordinatorCsv() const;
};

// Population coefficient of variation; throws on zero mean.
double cov(const std::vector<double>& xs);

// CoV of mean per-flow throughput across a flow group over a window.
double compute_fairness(const MetricsLog& log,
                        const std::vector<std::string>& flowIds, double t0,
                        double t1);

struct CheckResult {
    std::string kind;
    std::string detail;
    double measured;
    bool pass;
};

// Evaluates a scenario `expect` entry (raw JSON) against the log.
CheckResult evaluate_check(const MetricsLog& log, const std::string& rawJson);

}  // namespace pronet
