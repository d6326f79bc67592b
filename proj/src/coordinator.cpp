#include "pronet/coordinator.hpp"

#include <algorithm>

namespace pronet {

std::vector<double> balance_shares(const std::vector<double>& inputs,
                                   double alpha) {
    double sum = 0;
    for (double s : inputs) sum += s;
    double avg = inputs.empty() ? 0.0 : sum / inputs.size();
    double target = avg * (1.0 + alpha);
    std::vector<double> out;
    out.reserve(inputs.size());
    for (double s : inputs) out.push_back(target - (s - avg));
    return out;
}

void Coordinator::collect(const UsageReportMsg& report) {
    if (report.seq > windowId_) {
        pending_.push_back(report);
        return;
    }
    // late reports (seq < windowId) land in the currently open window;
    // a second report from the same host in one window is dropped
    received_.emplace(report.hostId, report);
}

std::vector<TargetUpdateMsg> Coordinator::closeWindow() {
    struct Entry {
        int hostId;
        int tenantId;
        double share;
    };
    // deterministic order: hosts ascending (map), entries in report order
    std::vector<Entry> entries;
    for (const auto& [hostId, rep] : received_)
        for (const auto& e : rep.entries)
            entries.push_back({hostId, e.tenantId, e.fairShare});

    std::map<int, TargetUpdateMsg> out;
    auto emit = [&](const std::vector<Entry>& group) {
        std::vector<double> inputs;
        inputs.reserve(group.size());
        for (const auto& e : group) inputs.push_back(e.share);
        auto targets = balance_shares(inputs, cfg_.alpha);
        for (size_t i = 0; i < group.size(); ++i) {
            double t = std::max(0.0, targets[i]);
            auto& upd = out[group[i].hostId];
            upd.hostId = group[i].hostId;
            upd.entries.push_back({group[i].tenantId, t});
            trace_.push_back({windowId_, group[i].tenantId, group[i].hostId,
                              group[i].share, t});
        }
    };

    if (cfg_.scope == BalancingScope::Global) {
        if (!entries.empty()) emit(entries);
    } else {
        std::map<int, std::vector<Entry>> byTenant;
        for (const auto& e : entries) byTenant[e.tenantId].push_back(e);
        for (const auto& [tenantId, group] : byTenant) emit(group);
    }

    received_.clear();
    ++windowId_;
    auto still = std::move(pending_);
    pending_.clear();
    for (auto& rep : still) collect(rep);

    std::vector<TargetUpdateMsg> updates;
    updates.reserve(out.size());
    for (auto& [hostId, upd] : out) updates.push_back(std::move(upd));
    return updates;
}

}  // namespace pronet
