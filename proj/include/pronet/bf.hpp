#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pronet {

// A bandwidth function maps a dimensionless fair share to an allocated
// bandwidth in bits/s. It is piecewise linear, non-decreasing, starts at
// fair share 0 and is constant beyond its last breakpoint.
struct BfPoint {
    double fairShare;
    double bandwidth;
};

class BandwidthFunction {
public:
    explicit BandwidthFunction(std::vector<BfPoint> pts);

    // Linear BF through (0, floor) with the given slope (bits/s per fair
    // share unit), capped at `cap`. floor < cap required.
    static BandwidthFunction linear(double slope, double cap, double floor = 0.0);

    double eval(double s) const;

    // Smallest fair share s with eval(s) >= bw (left edge of plateaus).
    // Throws if bw exceeds maxBandwidth().
    double inverse(double bw) const;

    // Exact trapezoid area under the curve over [s0, s1].
    double integral(double s0, double s1) const;

    double maxBandwidth() const { return pts_.back().bandwidth; }
    double maxFairShare() const { return pts_.back().fairShare; }
    const std::vector<BfPoint>& points() const { return pts_; }

private:
    std::vector<BfPoint> pts_;
};

// Piecewise-linear monotone map between two fair-share axes.
class TransformMap {
public:
    explicit TransformMap(std::vector<BfPoint> pts) : pts_(std::move(pts)) {}
    double apply(double s) const;
    const std::vector<BfPoint>& points() const { return pts_; }

private:
    std::vector<BfPoint> pts_;  // (sourceFairShare, targetFairShare)
};

// Pointwise sum; breakpoints are the merged union of the members'.
BandwidthFunction bf_sum(const std::vector<BandwidthFunction>& bfs);

// Transforming map T with tenant(T(s)) == addup(s), smallest-s' on tenant
// plateaus, saturating at the tenant's last breakpoint when the add-up BF
// exceeds the tenant's range.
TransformMap bf_transform(const BandwidthFunction& addup,
                          const BandwidthFunction& tenant);

// Per-flow aggregated BFs satisfying, for every s' in the tenant BF's
// domain (and tenant values within the add-up range):
//   sum_f agg_f(s') == tenant(s')
std::vector<BandwidthFunction> bf_aggregate(
    const std::vector<BandwidthFunction>& flowBfs,
    const BandwidthFunction& tenantBf);

// Initial unit-flow BF: slope (srcWeight+dstWeight)*unit bits/s per fair
// share unit, capped at deviceRateLimit. A nonzero minGuarantee lifts the
// curve so eval(0) == minGuarantee.
BandwidthFunction bf_init_flow(double srcWeight, double dstWeight,
                               double deviceRateLimit, double unit = 1e9,
                               double minGuarantee = 0.0);

// Signed fair-share step nFS with
//   integral(bf, oldFS, oldFS + nFS) == integral(bf, oldFS, targetFS),
// minimal in magnitude where zero-bandwidth plateaus make it non-unique.
double solve_compensation(const BandwidthFunction& bf, double oldFS,
                          double targetFS);

std::string bf_to_json(const BandwidthFunction& bf);

}  // namespace pronet
