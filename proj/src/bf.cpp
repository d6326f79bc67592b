#include "pronet/bf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pronet {

namespace {

constexpr double kMergeEps = 1e-12;

// Drop near-duplicate breakpoints and collinear interior points.
std::vector<BfPoint> normalize(std::vector<BfPoint> pts) {
    std::vector<BfPoint> out;
    for (const auto& p : pts) {
        if (!out.empty() && p.fairShare - out.back().fairShare < kMergeEps) {
            out.back().bandwidth = std::max(out.back().bandwidth, p.bandwidth);
            continue;
        }
        out.push_back(p);
    }
    if (out.size() < 3) return out;
    std::vector<BfPoint> slim;
    slim.push_back(out.front());
    for (size_t i = 1; i + 1 < out.size(); ++i) {
        const auto& a = slim.back();
        const auto& b = out[i];
        const auto& c = out[i + 1];
        double cross = (b.fairShare - a.fairShare) * (c.bandwidth - a.bandwidth) -
                       (c.fairShare - a.fairShare) * (b.bandwidth - a.bandwidth);
        double scale = std::max({1.0, std::abs(c.fairShare - a.fairShare) *
                                          std::abs(c.bandwidth - a.bandwidth)});
        if (std::abs(cross) <= 1e-12 * scale) continue;
        slim.push_back(b);
    }
    slim.push_back(out.back());
    return slim;
}

}  // namespace

BandwidthFunction::BandwidthFunction(std::vector<BfPoint> pts)
    : pts_(normalize(std::move(pts))) {
    if (pts_.empty()) throw std::invalid_argument("BF needs at least one breakpoint");
    if (std::abs(pts_.front().fairShare) > 1e-9)
        throw std::invalid_argument("BF must start at fair share 0");
    pts_.front().fairShare = 0.0;
    for (size_t i = 0; i < pts_.size(); ++i) {
        if (pts_[i].bandwidth < 0 || !std::isfinite(pts_[i].bandwidth) ||
            !std::isfinite(pts_[i].fairShare))
            throw std::invalid_argument("BF breakpoints must be finite and non-negative");
        if (i > 0) {
            if (pts_[i].fairShare <= pts_[i - 1].fairShare)
                throw std::invalid_argument("BF fair shares must be strictly increasing");
            if (pts_[i].bandwidth < pts_[i - 1].bandwidth - kMergeEps)
                throw std::invalid_argument("BF bandwidth must be non-decreasing");
        }
    }
}

BandwidthFunction BandwidthFunction::linear(double slope, double cap, double floor) {
    if (slope <= 0) throw std::invalid_argument("linear BF needs positive slope");
    if (cap <= floor) throw std::invalid_argument("linear BF needs cap above floor");
    return BandwidthFunction({{0.0, floor}, {(cap - floor) / slope, cap}});
}

double BandwidthFunction::eval(double s) const {
    if (s < 0) throw std::invalid_argument("fair share must be >= 0");
    if (s >= pts_.back().fairShare) return pts_.back().bandwidth;
    auto it = std::upper_bound(
        pts_.begin(), pts_.end(), s,
        [](double v, const BfPoint& p) { return v < p.fairShare; });
    const BfPoint& hi = *it;
    const BfPoint& lo = *(it - 1);
    double u = (s - lo.fairShare) / (hi.fairShare - lo.fairShare);
    return lo.bandwidth + u * (hi.bandwidth - lo.bandwidth);
}

double BandwidthFunction::inverse(double bw) const {
    if (bw < 0) throw std::invalid_argument("bandwidth must be >= 0");
    if (bw > maxBandwidth() * (1 + 1e-12) + 1e-9)
        throw std::domain_error("demand exceeds BF range");
    bw = std::min(bw, maxBandwidth());
    if (bw <= pts_.front().bandwidth) return 0.0;
    for (size_t i = 1; i < pts_.size(); ++i) {
        if (bw <= pts_[i].bandwidth) {
            const BfPoint& lo = pts_[i - 1];
            const BfPoint& hi = pts_[i];
            double u = (bw - lo.bandwidth) / (hi.bandwidth - lo.bandwidth);
            return lo.fairShare + u * (hi.fairShare - lo.fairShare);
        }
    }
    return pts_.back().fairShare;
}

double BandwidthFunction::integral(double s0, double s1) const {
    if (s0 < 0 || s0 > s1) throw std::invalid_argument("integral needs 0 <= s0 <= s1");
    double area = 0.0;
    double prevS = s0;
    double prevB = eval(s0);
    for (const auto& p : pts_) {
        if (p.fairShare <= s0) continue;
        if (p.fairShare >= s1) break;
        area += 0.5 * (prevB + p.bandwidth) * (p.fairShare - prevS);
        prevS = p.fairShare;
        prevB = p.bandwidth;
    }
    area += 0.5 * (prevB + eval(s1)) * (s1 - prevS);
    return area;
}

double TransformMap::apply(double s) const {
    if (s <= pts_.front().fairShare) return pts_.front().bandwidth;
    if (s >= pts_.back().fairShare) return pts_.back().bandwidth;
    auto it = std::upper_bound(
        pts_.begin(), pts_.end(), s,
        [](double v, const BfPoint& p) { return v < p.fairShare; });
    const BfPoint& hi = *it;
    const BfPoint& lo = *(it - 1);
    double u = (s - lo.fairShare) / (hi.fairShare - lo.fairShare);
    return lo.bandwidth + u * (hi.bandwidth - lo.bandwidth);
}

BandwidthFunction bf_sum(const std::vector<BandwidthFunction>& bfs) {
    if (bfs.empty()) throw std::invalid_argument("bf_sum over empty list");
    std::set<double> grid;
    for (const auto& bf : bfs)
        for (const auto& p : bf.points()) grid.insert(p.fairShare);
    std::vector<BfPoint> pts;
    for (double s : grid) {
        double total = 0.0;
        for (const auto& bf : bfs) total += bf.eval(s);
        pts.push_back({s, total});
    }
    return BandwidthFunction(std::move(pts));
}

TransformMap bf_transform(const BandwidthFunction& addup,
                          const BandwidthFunction& tenant) {
    // Kinks of s -> tenant^-1(min(addup(s), tenantMax)) can only sit at
    // addup breakpoints or at preimages of tenant breakpoint bandwidths.
    std::set<double> grid;
    for (const auto& p : addup.points()) grid.insert(p.fairShare);
    for (const auto& p : tenant.points()) {
        if (p.bandwidth <= addup.maxBandwidth())
            grid.insert(addup.inverse(p.bandwidth));
    }
    if (tenant.maxBandwidth() <= addup.maxBandwidth())
        grid.insert(addup.inverse(tenant.maxBandwidth()));
    std::vector<BfPoint> pts;
    for (double s : grid) {
        double bw = std::min(addup.eval(s), tenant.maxBandwidth());
        double sp = tenant.inverse(bw);
        if (!pts.empty() && sp < pts.back().bandwidth) sp = pts.back().bandwidth;
        pts.push_back({s, sp});
    }
    return TransformMap(std::move(pts));
}

std::vector<BandwidthFunction> bf_aggregate(
    const std::vector<BandwidthFunction>& flowBfs,
    const BandwidthFunction& tenantBf) {
    BandwidthFunction addup = bf_sum(flowBfs);
    // agg_f(s') = flow_f(S(s')) with S(s') = addup^-1(min(tenant(s'), addupMax)).
    // Then sum_f agg_f(s') = addup(S(s')) = tenant(s') wherever the tenant
    // value is attainable by the add-up BF.
    std::set<double> grid;  // on the tenant fair-share axis
    for (const auto& p : tenantBf.points()) grid.insert(p.fairShare);
    auto preimage = [&](double bw) {
        bw = std::min(bw, tenantBf.maxBandwidth());
        grid.insert(tenantBf.inverse(bw));
    };
    for (const auto& p : addup.points()) preimage(p.bandwidth);
    for (const auto& bf : flowBfs)
        for (const auto& p : bf.points()) preimage(addup.eval(p.fairShare));

    double addupMax = addup.maxBandwidth();
    std::vector<std::vector<BfPoint>> pts(flowBfs.size());
    for (double sp : grid) {
        double s = addup.inverse(std::min(tenantBf.eval(sp), addupMax));
        for (size_t f = 0; f < flowBfs.size(); ++f)
            pts[f].push_back({sp, flowBfs[f].eval(s)});
    }
    std::vector<BandwidthFunction> out;
    out.reserve(flowBfs.size());
    for (auto& v : pts) out.push_back(BandwidthFunction(std::move(v)));
    return out;
}

BandwidthFunction bf_init_flow(double srcWeight, double dstWeight,
                               double deviceRateLimit, double unit,
                               double minGuarantee) {
    if (srcWeight < 0 || dstWeight < 0)
        throw std::invalid_argument("weights must be >= 0");
    if (srcWeight + dstWeight == 0) throw std::invalid_argument("zero-weight flow");
    if (deviceRateLimit <= 0)
        throw std::invalid_argument("deviceRateLimit must be > 0");
    double slope = (srcWeight + dstWeight) * unit;
    if (minGuarantee >= deviceRateLimit)
        return BandwidthFunction({{0.0, deviceRateLimit}, {1.0, deviceRateLimit}});
    return BandwidthFunction::linear(slope, deviceRateLimit, minGuarantee);
}

static double prevKinkBelow(const BandwidthFunction& bf, double s) {
    double best = 0.0;
    for (const auto& p : bf.points()) {
        if (p.fairShare < s) best = p.fairShare;
        else break;
    }
    return best;
}

static double nextKinkAbove(const BandwidthFunction& bf, double s) {
    for (const auto& p : bf.points())
        if (p.fairShare > s) return p.fairShare;
    return s + 1.0;  // constant region beyond the last breakpoint
}

double solve_compensation(const BandwidthFunction& bf, double oldFS,
                          double targetFS) {
    if (oldFS < 0 || targetFS < 0)
        throw std::invalid_argument("fair shares must be >= 0");
    if (oldFS == targetFS) return 0.0;
    // The anchored integrals match exactly at targetFS; non-uniqueness only
    // arises from zero-bandwidth plateaus adjacent to the target, which
    // contribute no area. Shrink the step over those.
    double lo = std::min(oldFS, targetFS);
    double hi = std::max(oldFS, targetFS);
    double t = targetFS;
    if (targetFS > oldFS) {
        // pull t back over a trailing zero-bandwidth run
        while (t > lo) {
            double probe = std::max(lo, prevKinkBelow(bf, t));
            if (bf.integral(probe, t) > 0) break;
            t = probe;
        }
    } else {
        // push t forward over a leading zero-bandwidth run
        while (t < hi) {
            double probe = std::min(hi, nextKinkAbove(bf, t));
            if (bf.integral(t, probe) > 0) break;
            t = probe;
        }
    }
    return t - oldFS;
}

std::string bf_to_json(const BandwidthFunction& bf) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"breakpoints\": [";
    bool first = true;
    for (const auto& p : bf.points()) {
        if (!first) os << ", ";
        first = false;
        os << "[" << p.fairShare << ", " << p.bandwidth << "]";
    }
    os << "]}";
    return os.str();
}

}  // namespace pronet
