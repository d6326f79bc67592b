#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pronet/bf.hpp"

using namespace pronet;

namespace {

constexpr double kGbps = 1e9;

// Dense-sampling oracle: max relative error of f against g over [0, sMax].
template <typename F, typename G>
double max_rel_err(F&& f, G&& g, double sMax, int n = 1000) {
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        double s = sMax * i / n;
        double a = f(s);
        double b = g(s);
        double denom = std::max({std::abs(a), std::abs(b), 1e-9});
        worst = std::max(worst, std::abs(a - b) / denom);
    }
    return worst;
}

BandwidthFunction random_bf(std::mt19937_64& rng, double maxS = 20.0,
                            double maxBw = 40e9, bool allowFloor = true) {
    std::uniform_int_distribution<int> nSeg(1, 5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int n = nSeg(rng);
    std::vector<BfPoint> pts{
        {0.0, allowFloor && u(rng) < 0.2 ? u(rng) * maxBw * 0.1 : 0.0}};
    double s = 0.0, bw = pts[0].bandwidth;
    for (int i = 0; i < n; ++i) {
        s += 0.2 + u(rng) * maxS / n;
        if (u(rng) >= 0.3) bw += u(rng) * maxBw / n;  // else a flat segment
        pts.push_back({s, bw});
    }
    return BandwidthFunction(std::move(pts));
}

// Riemann-sum integral oracle.
double riemann(const BandwidthFunction& bf, double s0, double s1, int n = 200000) {
    double h = (s1 - s0) / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += bf.eval(s0 + (i + 0.5) * h);
    return acc * h;
}

}  // namespace

TEST_CASE("eval: linear interpolation and boundaries") {
    BandwidthFunction bf({{0, 0}, {10, 30 * kGbps}});
    CHECK(bf.eval(5) == doctest::Approx(15 * kGbps));
    CHECK(bf.eval(0) == 0.0);
    CHECK(bf.eval(10) == 30 * kGbps);
    CHECK(bf.eval(25) == 30 * kGbps);  // constant beyond the last breakpoint

    BandwidthFunction guar({{0, 2 * kGbps}, {10, 30 * kGbps}});
    CHECK(guar.eval(0) == 2 * kGbps);
}

TEST_CASE("eval: init-flow closed form vs dense-sampling oracle") {
    auto bf = bf_init_flow(1, 1, 40 * kGbps);
    CHECK(bf.eval(10) == doctest::Approx(20 * kGbps));
    CHECK(bf.eval(20) == doctest::Approx(40 * kGbps));
    auto closed = [](double s) { return std::min(2.0 * s * kGbps, 40 * kGbps); };
    CHECK(max_rel_err([&](double s) { return bf.eval(s); }, closed, 40.0) < 1e-12);
}

TEST_CASE("inverse: linear, zero and plateau left edge") {
    BandwidthFunction bf({{0, 0}, {10, 30 * kGbps}});
    CHECK(bf.inverse(15 * kGbps) == doctest::Approx(5.0));
    CHECK(bf.inverse(0) == 0.0);
    CHECK_THROWS(bf.inverse(31 * kGbps));

    BandwidthFunction plat({{0, 0}, {4, 8 * kGbps}, {20, 8 * kGbps}, {30, 12 * kGbps}});
    double s = plat.inverse(8 * kGbps);
    CHECK(s == doctest::Approx(4.0));
    // smallest-s rule against a dense fair-share scan
    double scan = -1;
    for (int i = 0; i <= 30000; ++i) {
        double cand = 30.0 * i / 30000;
        if (plat.eval(cand) >= 8 * kGbps) { scan = cand; break; }
    }
    CHECK(s == doctest::Approx(scan).epsilon(1e-3));
}

TEST_CASE("inverse round trip on attained bandwidths") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        auto bf = random_bf(rng);
        double bw = bf.points().front().bandwidth +
                    u(rng) * (bf.maxBandwidth() - bf.points().front().bandwidth);
        double back = bf.eval(bf.inverse(bw));
        CHECK(back == doctest::Approx(bw).epsilon(1e-9));
    }
}

TEST_CASE("eval is non-decreasing in s") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        auto bf = random_bf(rng);
        double prev = -1;
        for (int i = 0; i <= 500; ++i) {
            double v = bf.eval(bf.maxFairShare() * 1.2 * i / 500);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("bf_sum: identity, doubling, pointwise vs scalar addition") {
    BandwidthFunction a({{0, 0}, {10, 10}});
    auto one = bf_sum({a});
    CHECK(max_rel_err([&](double s) { return one.eval(s); },
                      [&](double s) { return a.eval(s); }, 12.0) < 1e-12);

    auto two = bf_sum({a, a});
    CHECK(two.eval(10) == doctest::Approx(20));
    CHECK(two.points().size() == 2);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        std::vector<BandwidthFunction> bfs{random_bf(rng), random_bf(rng), random_bf(rng)};
        auto sum = bf_sum(bfs);
        auto oracle = [&](double s) {
            double v = 0;
            for (auto& bf : bfs) v += bf.eval(s);
            return v;
        };
        CHECK(max_rel_err([&](double s) { return sum.eval(s); }, oracle, 25.0) < 1e-9);
        // exact at every merged breakpoint
        for (const auto& p : sum.points())
            CHECK(sum.eval(p.fairShare) == doctest::Approx(oracle(p.fairShare)).epsilon(1e-12));
    }
    CHECK_THROWS(bf_sum({}));
}

TEST_CASE("bf_transform: identity, scaling, clamping") {
    BandwidthFunction tenant({{0, 0}, {10, 10 * kGbps}});
    auto ident = bf_transform(tenant, tenant);
    for (int i = 0; i <= 100; ++i) {
        double s = 10.0 * i / 100;
        CHECK(ident.apply(s) == doctest::Approx(s).epsilon(1e-12));
    }

    BandwidthFunction addup({{0, 0}, {10, 20 * kGbps}});  // 2x tenant
    auto twice = bf_transform(addup, tenant);
    for (int i = 0; i <= 100; ++i) {
        double s = 5.0 * i / 100;  // tenant range covers addup(s) up to s=5
        CHECK(tenant.eval(twice.apply(s)) == doctest::Approx(addup.eval(s)).epsilon(1e-9));
    }
    // beyond the crossing point the map saturates at the tenant's sMax
    CHECK(twice.apply(8) == doctest::Approx(10.0));
    CHECK(twice.apply(10) == doctest::Approx(10.0));
}

TEST_CASE("bf_aggregate: trivial and symmetric cases") {
    BandwidthFunction tenant({{0, 0}, {8, 16 * kGbps}});
    BandwidthFunction flow({{0, 0}, {10, 30 * kGbps}});

    auto single = bf_aggregate({flow}, tenant);
    REQUIRE(single.size() == 1);
    CHECK(max_rel_err([&](double s) { return single[0].eval(s); },
                      [&](double s) { return tenant.eval(s); }, 8.0) < 1e-9);

    auto halves = bf_aggregate({flow, flow}, tenant);
    for (auto& h : halves)
        CHECK(max_rel_err([&](double s) { return h.eval(s); },
                          [&](double s) { return tenant.eval(s) / 2; }, 8.0) < 1e-9);
}

TEST_CASE("bf_aggregate: sum identity on random instances, incl. plateaus") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> nFlows(1, 6);
    for (int t = 0; t < 200; ++t) {
        int n = nFlows(rng);
        // Flow BFs start at 0 so every tenant value up to the add-up max is
        // attainable; guaranteed floors would make Eq-style exactness
        // impossible below the combined floor.
        std::vector<BandwidthFunction> flows;
        for (int i = 0; i < n; ++i)
            flows.push_back(random_bf(rng, 20.0, 40e9, /*allowFloor=*/false));
        auto addup = bf_sum(flows);
        if (addup.maxBandwidth() <= 0) continue;  // all-flat degenerate draw
        // tenant max kept within the add-up range so the identity is total
        std::uniform_real_distribution<double> frac(0.2, 1.0);
        double cap = addup.maxBandwidth() * frac(rng);
        BandwidthFunction tenant = [&] {
            auto bf = random_bf(rng, 15.0, cap, /*allowFloor=*/false);
            std::vector<BfPoint> pts = bf.points();
            double scale = cap / std::max(bf.maxBandwidth(), 1e-9);
            for (auto& p : pts) p.bandwidth *= scale;
            return BandwidthFunction(pts);
        }();
        if (tenant.maxBandwidth() <= 0) continue;
        auto aggs = bf_aggregate(flows, tenant);
        auto sumAgg = [&](double sp) {
            double v = 0;
            for (auto& a : aggs) v += a.eval(sp);
            return v;
        };
        CHECK(max_rel_err(sumAgg, [&](double sp) { return tenant.eval(sp); },
                          tenant.maxFairShare()) < 1e-6);
    }
}

TEST_CASE("bf_aggregate: tenant plateau shape is inherited") {
    // Two unequal linear flows under a tenant BF with a plateau; only the
    // sum identity is asserted, not the exact curves.
    BandwidthFunction f1({{0, 0}, {10, 10 * kGbps}});
    BandwidthFunction f2({{0, 0}, {10, 30 * kGbps}});
    BandwidthFunction tenant({{0, 0}, {4, 8 * kGbps}, {12, 8 * kGbps}, {20, 24 * kGbps}});
    auto aggs = bf_aggregate({f1, f2}, tenant);
    auto sumAgg = [&](double sp) { return aggs[0].eval(sp) + aggs[1].eval(sp); };
    CHECK(max_rel_err(sumAgg, [&](double sp) { return tenant.eval(sp); }, 20.0) < 1e-6);
    // flat on the tenant's plateau
    CHECK(aggs[0].eval(5) == doctest::Approx(aggs[0].eval(11)).epsilon(1e-9));
}

TEST_CASE("bf_init_flow: closed forms and guarantee variant") {
    auto bf = bf_init_flow(1, 1, 40 * kGbps);
    REQUIRE(bf.points().size() == 2);
    CHECK(bf.points()[1].fairShare == doctest::Approx(20.0));
    CHECK(bf.points()[1].bandwidth == doctest::Approx(40 * kGbps));

    auto capped = bf_init_flow(1, 0, 10 * kGbps);
    CHECK(capped.points()[1].fairShare == doctest::Approx(10.0));

    auto guar = bf_init_flow(1, 1, 40 * kGbps, 1e9, 2 * kGbps);
    CHECK(guar.eval(0) == 2 * kGbps);
    CHECK(guar.maxBandwidth() == 40 * kGbps);

    CHECK_THROWS_WITH(bf_init_flow(0, 0, 1e9), "zero-weight flow");
}

TEST_CASE("integral: closed forms and Riemann oracle") {
    BandwidthFunction c({{0, 7}, {100, 7}});
    CHECK(c.integral(2, 9) == doctest::Approx(49));

    BandwidthFunction lin({{0, 0}, {10, 10}});
    CHECK(lin.integral(0, 10) == doctest::Approx(50));

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        auto bf = random_bf(rng);
        double s0 = u(rng) * bf.maxFairShare();
        double s1 = s0 + u(rng) * (bf.maxFairShare() * 1.3 - s0);
        double exact = bf.integral(s0, s1);
        double approx = riemann(bf, s0, s1);
        CHECK(exact == doctest::Approx(approx).epsilon(1e-6));
    }
    CHECK_THROWS(lin.integral(5, 2));
}

TEST_CASE("integral additivity") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        auto bf = random_bf(rng);
        double a = u(rng) * 10, b = a + u(rng) * 10, c = b + u(rng) * 10;
        CHECK(bf.integral(a, c) ==
              doctest::Approx(bf.integral(a, b) + bf.integral(b, c)).epsilon(1e-12));
    }
}

TEST_CASE("solve_compensation: equality, strict increase, zero plateaus") {
    BandwidthFunction inc({{0, 0}, {10, 10 * kGbps}});
    CHECK(solve_compensation(inc, 4, 4) == 0.0);
    CHECK(solve_compensation(inc, 2, 5) == doctest::Approx(3.0));
    CHECK(solve_compensation(inc, 5, 2) == doctest::Approx(-3.0));

    // bisection oracle for the strictly increasing case
    auto oracle = [&](const BandwidthFunction& bf, double oldFS, double target) {
        double want = bf.integral(std::min(oldFS, target), std::max(oldFS, target));
        if (target >= oldFS) {
            double lo = 0, hi = target - oldFS + 1;
            for (int i = 0; i < 200; ++i) {
                double mid = 0.5 * (lo + hi);
                (bf.integral(oldFS, oldFS + mid) < want ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        double lo = -(oldFS - target) - 1, hi = 0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            (bf.integral(oldFS + mid, oldFS) > want ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    CHECK(solve_compensation(inc, 2, 5) == doctest::Approx(oracle(inc, 2, 5)).epsilon(1e-6));
    CHECK(solve_compensation(inc, 7, 1) == doctest::Approx(oracle(inc, 7, 1)).epsilon(1e-6));

    // flat-zero region between oldFS and targetFS: minimal-magnitude answer is 0
    BandwidthFunction flat0({{0, 0}, {6, 0}, {10, 4 * kGbps}});
    CHECK(solve_compensation(flat0, 1, 5) == 0.0);
    CHECK(solve_compensation(flat0, 5, 1) == 0.0);
    // partial overlap: step stops at the plateau edge
    CHECK(solve_compensation(flat0, 1, 8) == doctest::Approx(oracle(flat0, 1, 8)).epsilon(1e-6));
}
