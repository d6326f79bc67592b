#include "pronet/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pronet {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("scenario error at " + path + ": " + what);
}

template <typename T>
T get_or(const json& j, const char* key, T dflt) {
    if (!j.contains(key)) return dflt;
    return j.at(key).get<T>();
}

TopologySpec parse_topology(const json& j) {
    TopologySpec t;
    t.kind = get_or<std::string>(j, "kind", "dumbbell");
    t.delay = get_or(j, "delay", t.delay);
    if (t.kind == "dumbbell") {
        t.senders = get_or(j, "senders", t.senders);
        t.receivers = get_or(j, "receivers", t.receivers);
        t.bottleneckBps = get_or(j, "bottleneck", t.bottleneckBps);
        t.edgeBps = get_or(j, "edge", t.edgeBps);
        if (t.senders < 1 || t.receivers < 1)
            fail("topology", "dumbbell needs senders >= 1 and receivers >= 1");
    } else if (t.kind == "fattree") {
        t.k = get_or(j, "k", t.k);
        t.linkBps = get_or(j, "link", t.linkBps);
        if (t.k < 2 || t.k % 2) fail("topology.k", "fat-tree k must be even");
    } else if (t.kind == "explicit") {
        t.hosts = j.at("hosts").get<int>();
        t.switches = get_or(j, "switches", 0);
        for (const auto& l : j.at("links")) {
            if (!l.is_array() || l.size() < 3)
                fail("topology.links", "link must be [a, b, capacity(, delay)]");
            t.links.push_back({l[0].get<int>(), l[1].get<int>(),
                               l[2].get<double>(),
                               l.size() > 3 ? l[3].get<double>() : t.delay});
        }
    } else {
        fail("topology.kind", "unknown kind '" + t.kind + "'");
    }
    return t;
}

TenantSpec parse_tenant(const json& j, const std::string& path) {
    TenantSpec t;
    if (!j.contains("id")) fail(path, "tenant needs an id");
    t.id = j.at("id").get<int>();
    t.weight = get_or(j, "weight", 1.0);
    if (t.weight <= 0) fail(path + ".weight", "must be > 0");
    t.minGuarantee = get_or(j, "minGuarantee", 0.0);
    t.maxBw = get_or(j, "maxBw", 0.0);
    if (j.contains("bf")) {
        std::vector<BfPoint> pts;
        for (const auto& p : j.at("bf"))
            pts.push_back({p[0].get<double>(), p[1].get<double>()});
        t.bf = std::move(pts);
    }
    return t;
}

SourceSpec parse_source(const json& j, const std::string& path) {
    SourceSpec s;
    s.kind = get_or<std::string>(j, "kind", "cbr");
    if (s.kind != "cbr" && s.kind != "aimd" && s.kind != "poisson")
        fail(path + ".kind", "unknown kind '" + s.kind + "'");
    s.tenant = j.at("tenant").get<int>();
    s.src = j.at("src").get<int>();
    s.dst = j.at("dst").get<int>();
    if (s.src == s.dst) fail(path, "src == dst");
    s.rateBps = get_or(j, "rate", s.rateBps);
    s.start = get_or(j, "start", 0.0);
    s.stop = get_or(j, "stop", -1.0);
    s.flowSizeBytes = get_or<uint64_t>(j, "flowSize", 0);
    s.meanInterarrival = get_or(j, "meanInterarrival", s.meanInterarrival);
    s.count = get_or(j, "count", 0);
    return s;
}

PronetSpec parse_pronet(const json& j) {
    PronetSpec p;
    p.enabled = get_or(j, "enabled", true);
    p.reportCycle = get_or(j, "reportCycle", p.reportCycle);
    p.rateControlCycle = get_or(j, "rateControlCycle", p.reportCycle / 10.0);
    p.alpha = get_or(j, "alpha", p.alpha);
    p.k = get_or(j, "k", p.k);
    p.minFairShare = get_or(j, "minFairShare", p.minFairShare);
    p.fairShareUnit = get_or(j, "fairShareUnit", p.fairShareUnit);
    p.deviceRateLimit = get_or(j, "deviceRateLimit", 0.0);
    p.startingRate = get_or(j, "startingRate", p.startingRate);
    p.controlDelay = get_or(j, "controlDelay", 0.0);
    p.coordinatorScope = get_or<std::string>(j, "coordinatorScope", "global");
    if (p.coordinatorScope != "global" && p.coordinatorScope != "perTenant")
        fail("pronet.coordinatorScope", "must be 'global' or 'perTenant'");
    p.bufferLimitBytes = get_or<long long>(j, "bufferLimit", p.bufferLimitBytes);
    if (j.contains("cawc")) {
        const auto& c = j.at("cawc");
        p.cawc.slidingTime = get_or(c, "slidingTime", p.cawc.slidingTime);
        p.cawc.threshold = get_or(c, "threshold", p.cawc.threshold);
        p.cawc.checkPeriodPackets =
            get_or(c, "checkPeriodPackets", p.cawc.checkPeriodPackets);
    }
    if (j.contains("tenantCounter")) {
        const auto& c = j.at("tenantCounter");
        p.tenantCounter.enabled = get_or(c, "enabled", false);
        p.tenantCounter.th = get_or(c, "TH", p.tenantCounter.th);
    }
    if (j.contains("ecn")) {
        const auto& c = j.at("ecn");
        p.ecn.minBytes = get_or<long long>(c, "min", p.ecn.minBytes);
        p.ecn.maxBytes = get_or<long long>(c, "max", p.ecn.maxBytes);
        if (p.ecn.minBytes >= p.ecn.maxBytes) fail("pronet.ecn", "min >= max");
    }
    if (p.reportCycle <= 0 || p.rateControlCycle <= 0)
        fail("pronet", "cycles must be > 0");
    return p;
}

}  // namespace

Scenario parse_scenario(const std::string& jsonText) {
    json j;
    try {
        j = json::parse(jsonText);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("scenario parse error: ") + e.what());
    }
    Scenario sc;
    sc.name = get_or<std::string>(j, "name", "scenario");
    if (j.contains("topology")) sc.topology = parse_topology(j.at("topology"));
    if (!j.contains("tenants") || j.at("tenants").empty())
        fail("tenants", "at least one tenant required");
    int i = 0;
    for (const auto& t : j.at("tenants"))
        sc.tenants.push_back(parse_tenant(t, "tenants[" + std::to_string(i++) + "]"));
    i = 0;
    for (const auto& s : j.value("sources", json::array()))
        sc.sources.push_back(parse_source(s, "sources[" + std::to_string(i++) + "]"));
    if (j.contains("pronet")) sc.pronet = parse_pronet(j.at("pronet"));
    sc.duration = get_or(j, "duration", 1.0);
    sc.seed = get_or<uint64_t>(j, "seed", 1);
    sc.sampling = get_or(j, "sampling", 0.01);
    for (const auto& e : j.value("expect", json::array())) {
        if (!e.contains("kind")) fail("expect", "check needs a kind");
        sc.expects.push_back({e.at("kind").get<std::string>(), e.dump()});
    }
    if (sc.duration <= 0) fail("duration", "must be > 0");

    // source endpoints must be hosts of the topology
    Topology topo = build_topology(sc.topology);
    for (size_t s = 0; s < sc.sources.size(); ++s) {
        const auto& src = sc.sources[s];
        if (!topo.isHost(src.src) || !topo.isHost(src.dst))
            fail("sources[" + std::to_string(s) + "]", "endpoints must be hosts");
        bool known = false;
        for (const auto& t : sc.tenants) known = known || t.id == src.tenant;
        if (!known)
            fail("sources[" + std::to_string(s) + "].tenant", "unknown tenant id");
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string apply_overrides(const std::string& jsonText,
                            const std::vector<std::string>& overrides) {
    json j = json::parse(jsonText);
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("override must be key.path=value: " + ov);
        std::string path = ov.substr(0, eq);
        std::string value = ov.substr(eq + 1);
        json* cur = &j;
        size_t pos = 0;
        while (true) {
            size_t dot = path.find('.', pos);
            std::string key = path.substr(pos, dot - pos);
            if (dot == std::string::npos) {
                json v;
                try {
                    v = json::parse(value);
                } catch (const json::parse_error&) {
                    v = value;  // bare string
                }
                (*cur)[key] = v;
                break;
            }
            cur = &(*cur)[key];
            pos = dot + 1;
        }
    }
    return j.dump();
}

Topology build_topology(const TopologySpec& spec) {
    if (spec.kind == "dumbbell")
        return make_dumbbell(spec.senders, spec.receivers, spec.bottleneckBps,
                             spec.edgeBps, spec.delay);
    if (spec.kind == "fattree")
        return make_fattree(spec.k, spec.linkBps, spec.delay);
    Topology t;
    t.nHosts = spec.hosts;
    t.nSwitches = spec.switches;
    for (const auto& l : spec.links) t.addLink(l.a, l.b, l.capacityBps, l.delay);
    t.buildRouting();
    return t;
}

BandwidthFunction tenant_bf(const TenantSpec& t, const PronetSpec& p,
                            double autoMaxBw) {
    if (t.bf) return BandwidthFunction(*t.bf);
    double cap = t.maxBw > 0 ? t.maxBw : autoMaxBw;
    return BandwidthFunction::linear(t.weight * p.fairShareUnit, cap,
                                     t.minGuarantee);
}

}  // namespace pronet
