#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "pronet/coordinator.hpp"

using namespace pronet;

namespace {

double target_of(const std::vector<TargetUpdateMsg>& updates, int hostId,
                 int tenantId) {
    for (const auto& u : updates) {
        if (u.hostId != hostId) continue;
        for (const auto& e : u.entries)
            if (e.tenantId == tenantId) return e.fairShare;
    }
    FAIL("missing target for host ", hostId, " tenant ", tenantId);
    return -1;
}

}  // namespace

TEST_CASE("balance: worked examples") {
    // equal contributors, alpha 0.1 -> everyone gets 1.1 s
    auto eq = balance_shares({5, 5, 5}, 0.1);
    for (double t : eq) CHECK(t == doctest::Approx(5.5));

    // [4, 6] at alpha 0: under-user boosted, over-user trimmed
    auto flip = balance_shares({4, 6}, 0.0);
    CHECK(flip[0] == doctest::Approx(6.0));
    CHECK(flip[1] == doctest::Approx(4.0));

    // single contributor: Diff = 0
    auto solo = balance_shares({10}, 0.1);
    CHECK(solo[0] == doctest::Approx(11.0));
}

TEST_CASE("balance: properties over random arrays") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 10000; ++t) {
        int n = 1 + int(u(rng) * 16);
        double alpha = u(rng) * 0.5;
        std::vector<double> in;
        for (int i = 0; i < n; ++i) in.push_back(u(rng) * 40);
        auto out = balance_shares(in, alpha);

        // conservation up to acceleration (before the zero floor)
        double sin = 0, sout = 0;
        for (int i = 0; i < n; ++i) {
            sin += in[i];
            sout += out[i];
        }
        CHECK(sout == doctest::Approx((1 + alpha) * sin).epsilon(1e-12));

        // alpha = 0: symmetric pull around the average
        auto sym = balance_shares(in, 0.0);
        double avg = sin / n;
        for (int i = 0; i < n; ++i)
            CHECK(sym[i] - avg == doctest::Approx(-(in[i] - avg)).epsilon(1e-9));

        // equal inputs at alpha = 0 are a fixpoint
        std::vector<double> flat(n, in[0]);
        auto fix = balance_shares(flat, 0.0);
        for (double v : fix) CHECK(v == doctest::Approx(in[0]).epsilon(1e-12));
    }
}

TEST_CASE("window bookkeeping: one report per host, late and future reports") {
    Coordinator coord({0.0, BalancingScope::PerTenant});
    coord.collect({1, 0, {{7, 4.0}}});
    coord.collect({1, 0, {{7, 99.0}}});  // duplicate host: dropped
    coord.collect({2, 0, {{7, 6.0}}});
    coord.collect({3, 1, {{7, 10.0}}});  // future window: deferred

    auto u0 = coord.closeWindow();
    CHECK(target_of(u0, 1, 7) == doctest::Approx(6.0));
    CHECK(target_of(u0, 2, 7) == doctest::Approx(4.0));
    CHECK(u0.size() == 2);  // host 3 not in this window

    coord.collect({4, 0, {{7, 10.0}}});  // late: joins the open window
    auto u1 = coord.closeWindow();
    CHECK(u1.size() == 2);  // deferred host 3 + late host 4
    CHECK(target_of(u1, 3, 7) == doctest::Approx(10.0));
    CHECK(target_of(u1, 4, 7) == doctest::Approx(10.0));
}

TEST_CASE("per-tenant scope isolates tenants; global scope pools them") {
    UsageReportMsg h1{1, 0, {{7, 2.0}, {8, 10.0}}};
    UsageReportMsg h2{2, 0, {{7, 4.0}, {8, 12.0}}};

    Coordinator per({0.0, BalancingScope::PerTenant});
    per.collect(h1);
    per.collect(h2);
    auto up = per.closeWindow();
    CHECK(target_of(up, 1, 7) == doctest::Approx(4.0));   // avg 3 within tenant 7
    CHECK(target_of(up, 2, 7) == doctest::Approx(2.0));
    CHECK(target_of(up, 1, 8) == doctest::Approx(12.0));  // avg 11 within tenant 8
    CHECK(target_of(up, 2, 8) == doctest::Approx(10.0));

    Coordinator glob({0.0, BalancingScope::Global});
    glob.collect(h1);
    glob.collect(h2);
    auto ug = glob.closeWindow();
    // pooled avg = 7: every entry pulled toward it
    CHECK(target_of(ug, 1, 7) == doctest::Approx(12.0));
    CHECK(target_of(ug, 1, 8) == doctest::Approx(4.0));
}

TEST_CASE("targets never go negative") {
    Coordinator coord({0.0, BalancingScope::PerTenant});
    coord.collect({1, 0, {{7, 0.0}}});
    coord.collect({2, 0, {{7, 100.0}}});
    auto u = coord.closeWindow();
    CHECK(target_of(u, 1, 7) == doctest::Approx(100.0));
    CHECK(target_of(u, 2, 7) == 0.0);  // 50 - 50 - ... floored at 0
}

TEST_CASE("arrival order within a window does not change the targets") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<UsageReportMsg> reports;
        int nHosts = 2 + int(u(rng) * 6);
        for (int h = 0; h < nHosts; ++h) {
            UsageReportMsg r{h, 0, {}};
            for (int tenant = 0; tenant < 3; ++tenant)
                if (u(rng) < 0.8) r.entries.push_back({tenant, u(rng) * 20});
            reports.push_back(r);
        }
        auto run = [&](const std::vector<UsageReportMsg>& rs) {
            Coordinator c({0.1, t % 2 ? BalancingScope::Global
                                      : BalancingScope::PerTenant});
            for (const auto& r : rs) c.collect(r);
            return c.closeWindow();
        };
        auto a = run(reports);
        std::shuffle(reports.begin(), reports.end(), rng);
        auto b = run(reports);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].hostId == b[i].hostId);
            REQUIRE(a[i].entries.size() == b[i].entries.size());
            for (size_t j = 0; j < a[i].entries.size(); ++j) {
                CHECK(a[i].entries[j].tenantId == b[i].entries[j].tenantId);
                CHECK(a[i].entries[j].fairShare == b[i].entries[j].fairShare);
            }
        }
    }
}

TEST_CASE("trace rows cover every (window, tenant, host) input") {
    Coordinator coord({0.1, BalancingScope::PerTenant});
    coord.collect({1, 0, {{7, 2.0}}});
    coord.collect({2, 0, {{7, 4.0}}});
    coord.closeWindow();
    coord.collect({1, 1, {{7, 3.0}}});
    coord.closeWindow();
    REQUIRE(coord.trace().size() == 3);
    CHECK(coord.trace()[0].windowId == 0);
    CHECK(coord.trace()[2].windowId == 1);
    CHECK(coord.trace()[2].inputFS == doctest::Approx(3.0));
}
