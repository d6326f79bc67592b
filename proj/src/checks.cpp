#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pronet/metrics.hpp"

namespace pronet {

using nlohmann::json;

namespace {

// Per-window averages of a sampled series over [t0, t1].
std::vector<double> window_averages(const MetricsLog& log,
                                    const std::string& scope,
                                    const std::string& id, double t0, double t1,
                                    double window) {
    int nWin = std::max(1, int(std::floor((t1 - t0) / window + 1e-9)));
    std::vector<double> sum(nWin, 0.0);
    std::vector<int> cnt(nWin, 0);
    for (const auto& r : log.rows) {
        if (r.scope != scope || r.id != id) continue;
        if (r.time <= t0 || r.time > t1 + 1e-12) continue;
        int w = std::min(nWin - 1, int((r.time - t0 - 1e-12) / window));
        sum[w] += r.throughputBps;
        cnt[w] += 1;
    }
    std::vector<double> out;
    for (int w = 0; w < nWin; ++w)
        if (cnt[w] > 0) out.push_back(sum[w] / cnt[w]);
    return out;
}

std::string describe(const json& j) {
    return j.dump();
}

}  // namespace

CheckResult evaluate_check(const MetricsLog& log, const std::string& rawJson) {
    json j = json::parse(rawJson);
    std::string kind = j.at("kind").get<std::string>();
    double t0 = j.value("t0", 0.0);
    double t1 = j.value("t1", 1e30);

    if (kind == "tenantRatio") {
        std::string a = std::to_string(j.at("a").get<int>());
        std::string b = std::to_string(j.at("b").get<int>());
        double ta = log.seriesAvg("tenant", a, t0, t1);
        double tb = log.seriesAvg("tenant", b, t0, t1);
        double ratio = tb > 0 ? ta / tb : 0.0;
        bool pass = ratio >= j.at("min").get<double>() &&
                    ratio <= j.at("max").get<double>();
        return {kind, describe(j), ratio, pass};
    }
    if (kind == "tenantCov" || kind == "flowCov") {
        std::vector<double> means;
        if (kind == "tenantCov") {
            for (const auto& t : j.at("tenants"))
                means.push_back(
                    log.seriesAvg("tenant", std::to_string(t.get<int>()), t0, t1));
        } else {
            int tenant = j.at("tenant").get<int>();
            for (const auto& f : log.flows)
                if (f.tenantId == tenant)
                    means.push_back(log.seriesAvg("flow", f.id, t0, t1));
        }
        double c = cov(means);
        return {kind, describe(j), c, c <= j.at("max").get<double>()};
    }
    if (kind == "linkUtilMin" || kind == "linkUtilMax") {
        std::string id = j.at("link").get<std::string>();
        auto capIt = log.linkCapacity.find(id);
        if (capIt == log.linkCapacity.end())
            throw std::runtime_error("unknown link id in check: " + id);
        double window = j.value("window", 0.1);
        auto avgs = window_averages(log, "link", id, t0, t1, window);
        if (avgs.empty()) throw std::runtime_error("no samples for link " + id);
        if (kind == "linkUtilMin") {
            double worst = *std::min_element(avgs.begin(), avgs.end()) / capIt->second;
            return {kind, describe(j), worst, worst >= j.at("min").get<double>()};
        }
        double best = *std::max_element(avgs.begin(), avgs.end()) / capIt->second;
        return {kind, describe(j), best, best <= j.at("max").get<double>()};
    }
    if (kind == "tenantMinBw") {
        std::string id = std::to_string(j.at("tenant").get<int>());
        double window = j.value("window", 0.1);
        auto avgs = window_averages(log, "tenant", id, t0, t1, window);
        if (avgs.empty()) throw std::runtime_error("no samples for tenant " + id);
        double worst = *std::min_element(avgs.begin(), avgs.end());
        return {kind, describe(j), worst, worst >= j.at("min").get<double>()};
    }
    if (kind == "tenantShareOfLink") {
        // tenant throughput as a fraction of one link's capacity
        std::string tid = std::to_string(j.at("tenant").get<int>());
        std::string link = j.at("link").get<std::string>();
        double cap = log.linkCapacity.at(link);
        double frac = log.seriesAvg("tenant", tid, t0, t1) / cap;
        bool pass =
            frac >= j.at("min").get<double>() && frac <= j.at("max").get<double>();
        return {kind, describe(j), frac, pass};
    }
    throw std::runtime_error("unknown check kind: " + kind);
}

}  // namespace pronet
