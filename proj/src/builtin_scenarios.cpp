#include "pronet/builtin_scenarios.hpp"

#include <stdexcept>

#include <json.hpp>

namespace pronet {

using nlohmann::json;

namespace {

json common_pronet() {
    return json{
        {"reportCycle", 0.01},
        {"rateControlCycle", 0.001},
        {"alpha", 0.1},
        {"k", 0.5},
        {"minFairShare", 1.0},
        {"fairShareUnit", 1e7},
        {"startingRate", 1e8},
        {"coordinatorScope", "global"},
        {"cawc", {{"slidingTime", 1e-3}, {"threshold", 0.2}, {"checkPeriodPackets", 1}}},
        {"tenantCounter", {{"enabled", true}, {"TH", 0.1}}},
        {"ecn", {{"min", 30000}, {"max", 60000}}},
        {"bufferLimit", 150000},
    };
}

json dumbbell_4x2() {
    return json{{"kind", "dumbbell"}, {"senders", 4},        {"receivers", 2},
                {"bottleneck", 1e9},  {"edge", 2.5e9},       {"delay", 5e-6}};
}

json src(const char* kind, int tenant, int s, int d, double rate = 0,
         double start = 0, double stop = -1) {
    json j{{"kind", kind}, {"tenant", tenant}, {"src", s}, {"dst", d}};
    if (rate > 0) j["rate"] = rate;
    if (start > 0) j["start"] = start;
    if (stop >= 0) j["stop"] = stop;
    return j;
}

// Equal weights, heterogeneous offered rates, UDP-style senders.
json fig7() {
    json sources = json::array();
    for (int s = 0; s < 4; ++s)
        for (int d = 4; d <= 5; ++d) {
            sources.push_back(src("cbr", 1, s, d, 1e8));
            sources.push_back(src("cbr", 2, s, d, 4e8));
        }
    return json{
        {"name", "fig7-equal-weight-udp"},
        {"topology", dumbbell_4x2()},
        {"tenants", {{{"id", 1}, {"weight", 1}}, {{"id", 2}, {"weight", 1}}}},
        {"sources", sources},
        {"pronet", common_pronet()},
        {"duration", 5.0},
        {"seed", 1},
        {"sampling", 0.01},
        {"expect",
         {{{"kind", "tenantCov"}, {"tenants", {1, 2}}, {"max", 0.10}, {"t0", 3.0}, {"t1", 5.0}},
          {{"kind", "flowCov"}, {"tenant", 1}, {"max", 0.15}, {"t0", 3.0}, {"t1", 5.0}},
          {{"kind", "flowCov"}, {"tenant", 2}, {"max", 0.15}, {"t0", 3.0}, {"t1", 5.0}}}},
    };
}

// Weighted tenants, TCP-style senders.
json fig8() {
    json sources = json::array();
    for (int s = 0; s < 4; ++s)
        for (int d = 4; d <= 5; ++d) {
            sources.push_back(src("aimd", 1, s, d));
            sources.push_back(src("aimd", 2, s, d));
        }
    return json{
        {"name", "fig8-weighted-tcp"},
        {"topology", dumbbell_4x2()},
        {"tenants", {{{"id", 1}, {"weight", 1}}, {{"id", 2}, {"weight", 2}}}},
        {"sources", sources},
        {"pronet", common_pronet()},
        {"duration", 5.0},
        {"seed", 1},
        {"sampling", 0.01},
        {"expect",
         {{{"kind", "tenantRatio"}, {"a", 2}, {"b", 1}, {"min", 1.8}, {"max", 2.2}, {"t0", 3.0}, {"t1", 5.0}}}},
    };
}

// Weighted tenants, mixed UDP/TCP senders.
json fig9() {
    json sources = json::array();
    for (int s = 0; s < 2; ++s)
        for (int d = 4; d <= 5; ++d) {
            sources.push_back(src("cbr", 1, s, d, 2e8));
            sources.push_back(src("cbr", 2, s, d, 2e8));
        }
    for (int s = 2; s < 4; ++s)
        for (int d = 4; d <= 5; ++d) {
            sources.push_back(src("aimd", 1, s, d));
            sources.push_back(src("aimd", 2, s, d));
        }
    return json{
        {"name", "fig9-weighted-mixed"},
        {"topology", dumbbell_4x2()},
        {"tenants", {{{"id", 1}, {"weight", 1}}, {{"id", 2}, {"weight", 2}}}},
        {"sources", sources},
        {"pronet", common_pronet()},
        {"duration", 5.0},
        {"seed", 1},
        {"sampling", 0.01},
        {"expect",
         {{{"kind", "tenantRatio"}, {"a", 2}, {"b", 1}, {"min", 1.8}, {"max", 2.2}, {"t0", 3.0}, {"t1", 5.0}}}},
    };
}

// Work conservation with staggered arrivals/departures.
json fig10a() {
    json sources = json::array();
    sources.push_back(src("cbr", 1, 0, 2, 1.1e9, 0.0, 2.2));
    sources.push_back(src("cbr", 2, 1, 2, 1.1e9, 0.3, 3.0));
    sources.push_back(src("cbr", 1, 0, 3, 1.1e9, 0.8, 1.9));
    sources.push_back(src("cbr", 2, 1, 3, 1.1e9, 1.2, 2.6));
    return json{
        {"name", "fig10a-work-conservation"},
        {"topology",
         {{"kind", "dumbbell"}, {"senders", 2}, {"receivers", 2}, {"bottleneck", 1e9}, {"edge", 2.5e9}, {"delay", 5e-6}}},
        {"tenants", {{{"id", 1}, {"weight", 1}}, {{"id", 2}, {"weight", 2}}}},
        {"sources", sources},
        {"pronet", common_pronet()},
        {"duration", 3.0},
        {"seed", 1},
        {"sampling", 0.01},
        {"expect",
         {{{"kind", "linkUtilMin"}, {"link", "4->5"}, {"min", 0.95}, {"t0", 0.2}, {"t1", 3.0}, {"window", 0.1}},
          {{"kind", "tenantShareOfLink"}, {"tenant", 2}, {"link", "4->5"}, {"min", 0.567}, {"max", 0.767}, {"t0", 0.95}, {"t1", 1.2}}}},
    };
}

// Minimum guarantee plus weighted surplus.
json fig10b() {
    json tenants = json::array();
    json sources = json::array();
    json expects = json::array();
    for (int i = 1; i <= 4; ++i) {
        tenants.push_back({{"id", i}, {"weight", i}, {"minGuarantee", 1e8}});
        sources.push_back(src("cbr", i, i - 1, 4, 1.1e9));
        expects.push_back({{"kind", "tenantMinBw"}, {"tenant", i}, {"min", 0.95e8}, {"t0", 0.1}, {"t1", 3.0}, {"window", 0.1}});
        double share = (1e8 + 6e8 * i / 10.0) / 1e9;
        expects.push_back({{"kind", "tenantShareOfLink"}, {"tenant", i}, {"link", "5->6"}, {"min", share * 0.85}, {"max", share * 1.15}, {"t0", 2.0}, {"t1", 3.0}});
    }
    return json{
        {"name", "fig10b-min-guarantee"},
        {"topology",
         {{"kind", "dumbbell"}, {"senders", 4}, {"receivers", 1}, {"bottleneck", 1e9}, {"edge", 2.5e9}, {"delay", 5e-6}}},
        {"tenants", tenants},
        {"sources", sources},
        {"pronet", common_pronet()},
        {"duration", 3.0},
        {"seed", 1},
        {"sampling", 0.01},
        {"expect", expects},
    };
}

// Scaled many-tenant run on a fat-tree; only the weight-ratio property.
json fig12() {
    json tenants = json::array();
    json sources = json::array();
    for (int i = 1; i <= 8; ++i) {
        tenants.push_back({{"id", i}, {"weight", i % 2 ? 1 : 2}});
        sources.push_back(src("aimd", i, i, 0));
        json p = src("poisson", i, i, 0);
        p["flowSize"] = 375000;
        p["meanInterarrival"] = 0.01;
        sources.push_back(p);
    }
    return json{
        {"name", "fig12-fattree-tenants"},
        {"topology", {{"kind", "fattree"}, {"k", 4}, {"link", 1e9}, {"delay", 5e-6}}},
        {"tenants", tenants},
        {"sources", sources},
        {"pronet", common_pronet()},
        {"duration", 4.0},
        {"seed", 1},
        {"sampling", 0.01},
        {"expect",
         {{{"kind", "tenantRatio"}, {"a", 2}, {"b", 1}, {"min", 1.8}, {"max", 2.2}, {"t0", 2.0}, {"t1", 4.0}},
          {{"kind", "tenantRatio"}, {"a", 4}, {"b", 3}, {"min", 1.8}, {"max", 2.2}, {"t0", 2.0}, {"t1", 4.0}}}},
    };
}

// Intra-tenant congestion on two disjoint bottlenecks (tenant-counter on).
json fig13() {
    return json{
        {"name", "fig13-intra-tenant"},
        {"topology",
         {{"kind", "explicit"},
          {"hosts", 4},
          {"switches", 2},
          {"links", {{0, 4, 2.5e9, 5e-6}, {4, 2, 1e9, 5e-6}, {1, 5, 2.5e9, 5e-6}, {5, 3, 1e9, 5e-6}, {4, 5, 2.5e9, 5e-6}}}}},
        {"tenants", {{{"id", 1}, {"weight", 1}}, {{"id", 2}, {"weight", 2}}}},
        {"sources",
         {src("cbr", 1, 0, 2, 1.05e9), src("cbr", 2, 1, 3, 1.05e9)}},
        {"pronet", common_pronet()},
        {"duration", 3.0},
        {"seed", 1},
        {"sampling", 0.01},
        {"expect",
         {{{"kind", "linkUtilMin"}, {"link", "4->2"}, {"min", 0.95}, {"t0", 0.2}, {"t1", 3.0}, {"window", 0.1}},
          {{"kind", "linkUtilMin"}, {"link", "5->3"}, {"min", 0.95}, {"t0", 0.2}, {"t1", 3.0}, {"window", 0.1}}}},
    };
}

}  // namespace

std::string builtin_scenario(const std::string& figureId) {
    if (figureId == "fig7") return fig7().dump(2);
    if (figureId == "fig8") return fig8().dump(2);
    if (figureId == "fig9") return fig9().dump(2);
    if (figureId == "fig10a") return fig10a().dump(2);
    if (figureId == "fig10b") return fig10b().dump(2);
    if (figureId == "fig12") return fig12().dump(2);
    if (figureId == "fig13") return fig13().dump(2);
    throw std::runtime_error("unknown figure id: " + figureId);
}

std::vector<std::string> builtin_scenario_ids() {
    return {"fig7", "fig8", "fig9", "fig10a", "fig10b", "fig12", "fig13"};
}

}  // namespace pronet
