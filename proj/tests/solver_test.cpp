#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "vfcsim/policy.hpp"
#include "vfcsim/solver.hpp"

using namespace vfcsim;

TEST_CASE("a single requested content takes the single platoon slot") {
    const ContentCatalog catalog = test::tiny_catalog(3);
    const PlatoonState platoon = test::tiny_platoon(1, 100);  // one slot
    const VfcState vfc = test::tiny_vfc({{50.0, 100}});
    const CapacityPlan plan = capacity_slots(platoon, vfc, 100);
    const DelayTables tables = build_delay_tables(platoon, vfc, test::default_links(), 100, 1);
    const RequestMatrix requests = test::make_requests({{1, 1}});

    const CachingDecision d = clairvoyant_place(requests, plan, tables, catalog);
    CHECK(d.platoon[0] == std::vector<int>{1});
    CHECK(validate(d, plan, catalog).ok());
    CHECK(round_delay(requests, d, tables).objective_s == 0.0);
}

TEST_CASE("contention for the requester slot favors the higher-demand content") {
    // Vehicle 1 requests f1 (two riders on other vehicles also want it) and
    // f2 (only vehicle 1). One slot on vehicle 1, one slot on a distant VFC
    // vehicle. Enumerating both assignments shows f1 belongs on the platoon.
    const ContentCatalog catalog = test::tiny_catalog(2);
    const PlatoonState platoon = test::tiny_platoon(3, 100);
    const VfcState vfc = test::tiny_vfc({{199.0, 100}});
    CapacityPlan plan;
    plan.platoon_slots = {1, 0, 0};
    plan.vfc_slots = {1};
    const DelayTables tables = build_delay_tables(platoon, vfc, test::default_links(), 100, 1);
    const RequestMatrix requests = test::make_requests({{1, 1}, {2, 1}, {3, 1}, {1, 2}});

    const CachingDecision got = clairvoyant_place(requests, plan, tables, catalog);

    // oracle: enumerate both placements through the canonical evaluator
    CachingDecision a;  // f1 on vehicle 1, f2 on VFC
    a.platoon = {{1}, {}, {}};
    a.vfc = {{2}};
    CachingDecision b;  // f2 on vehicle 1, f1 on VFC
    b.platoon = {{2}, {}, {}};
    b.vfc = {{1}};
    const double cost_a = round_delay(requests, a, tables).objective_s;
    const double cost_b = round_delay(requests, b, tables).objective_s;
    REQUIRE(cost_a < cost_b);
    CHECK(round_delay(requests, got, tables).objective_s == cost_a);
    CHECK(got.platoon[0] == std::vector<int>{1});
}

TEST_CASE("brute force refuses instances beyond its guard") {
    const ContentCatalog big = test::tiny_catalog(9);
    const PlatoonState platoon = test::tiny_platoon(1, 100);
    const VfcState vfc = test::tiny_vfc({{50.0, 100}});
    const CapacityPlan plan = capacity_slots(platoon, vfc, 100);
    const DelayTables tables = build_delay_tables(platoon, vfc, test::default_links(), 100, 1);
    CHECK_THROWS_AS(brute_force_place(test::make_requests({{1, 1}}), plan, tables, big),
                    std::invalid_argument);

    const ContentCatalog cat8 = test::tiny_catalog(8);
    const PlatoonState wide = test::tiny_platoon(1, 700);  // 7 slots > 6
    const CapacityPlan plan7 = capacity_slots(wide, vfc, 100);
    const DelayTables tables7 = build_delay_tables(wide, vfc, test::default_links(), 100, 1);
    CHECK_THROWS_AS(brute_force_place(test::make_requests({{1, 1}}), plan7, tables7, cat8),
                    std::invalid_argument);
}

TEST_CASE("full coverage leaves no RSU terms") {
    const ContentCatalog catalog = test::tiny_catalog(6);
    const PlatoonState platoon = test::tiny_platoon(2, 200);  // 2+2 slots
    const VfcState vfc = test::tiny_vfc({{60.0, 200}});       // 2 slots
    const CapacityPlan plan = capacity_slots(platoon, vfc, 100);
    const DelayTables tables = build_delay_tables(platoon, vfc, test::default_links(), 100, 1);
    const RequestMatrix requests = test::make_requests({{1, 1}, {1, 2}, {2, 3}, {2, 4}});

    const CachingDecision d = brute_force_place(requests, plan, tables, catalog);
    const auto index = d.placement_index();
    for (const auto& [i, f] : requests.requests) {
        CHECK(index.at(f).tier != Tier::cloud);
    }
}

TEST_CASE("clairvoyant matches brute force exactly on 100 in-guard instances") {
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 100; ++seed) {
        const test::FuzzWorld w = test::fuzz_world(seed, true);
        if (w.plan.total() > 6 || static_cast<int>(w.catalog.size()) < w.plan.total()) continue;
        ++checked;

        const CachingDecision fast = clairvoyant_place(w.requests, w.plan, w.tables, w.catalog);
        const CachingDecision slow = brute_force_place(w.requests, w.plan, w.tables, w.catalog);
        REQUIRE(validate(fast, w.plan, w.catalog).ok());
        REQUIRE(validate(slow, w.plan, w.catalog).ok());

        const double fast_objective = round_delay(w.requests, fast, w.tables).objective_s;
        const double slow_objective = round_delay(w.requests, slow, w.tables).objective_s;
        CHECK(fast_objective == slow_objective);
    }
}

TEST_CASE("clairvoyant dominates the list policies on fuzzed rounds") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const test::FuzzWorld w = test::fuzz_world(seed, false);
        if (static_cast<int>(w.catalog.size()) < w.plan.total()) continue;

        const CachingDecision oracle = clairvoyant_place(w.requests, w.plan, w.tables, w.catalog);
        const double oracle_objective = round_delay(w.requests, oracle, w.tables).objective_s;

        RankedList fallback;
        for (const ContentItem& item : w.catalog.items()) fallback.ids.push_back(item.content_id);
        for (int variant = 0; variant < 3; ++variant) {
            RankedList list;
            if (variant == 0) {
                list = random_rank(w.catalog, seed);
            } else if (variant == 1) {
                list = fallback;
            } else {
                for (auto it = fallback.ids.rbegin(); it != fallback.ids.rend(); ++it) {
                    list.ids.push_back(*it);
                }
            }
            const CachingDecision d = map_list_to_decision(list, w.plan, w.catalog, fallback);
            const double objective = round_delay(w.requests, d, w.tables).objective_s;
            CHECK(oracle_objective <= objective);
        }
    }
}

TEST_CASE("tight catalogs force requested contents into cache") {
    // catalog == total slots + 1, so all but one content must be cached;
    // exercises the coupling between cloud capacity and backfill
    const ContentCatalog catalog = test::tiny_catalog(5);
    const PlatoonState platoon = test::tiny_platoon(2, 100);  // 1 + 1 slots
    const VfcState vfc = test::tiny_vfc({{80.0, 200}});       // 2 slots
    const CapacityPlan plan = capacity_slots(platoon, vfc, 100);
    const DelayTables tables = build_delay_tables(platoon, vfc, test::default_links(), 100, 1);
    const RequestMatrix requests =
        test::make_requests({{1, 1}, {1, 2}, {2, 3}, {2, 4}, {1, 5}});

    const CachingDecision fast = clairvoyant_place(requests, plan, tables, catalog);
    const CachingDecision slow = brute_force_place(requests, plan, tables, catalog);
    REQUIRE(validate(fast, plan, catalog).ok());
    CHECK(fast.cloud.size() == 1);
    CHECK(round_delay(requests, fast, tables).objective_s ==
          round_delay(requests, slow, tables).objective_s);
}
