#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "support.hpp"
#include "vfcsim/scenario.hpp"

using namespace vfcsim;

namespace {

ScenarioConfig table_defaults() {
    ScenarioConfig cfg;  // defaults mirror the parameter table
    return cfg;
}

bool same_vfc(const VfcState& a, const VfcState& b) {
    if (a.vehicles.size() != b.vehicles.size()) return false;
    for (std::size_t k = 0; k < a.vehicles.size(); ++k) {
        if (a.vehicles[k].vehicle_id != b.vehicles[k].vehicle_id) return false;
        if (a.vehicles[k].distance_to_leader_m != b.vehicles[k].distance_to_leader_m) return false;
        if (a.vehicles[k].capacity_bytes != b.vehicles[k].capacity_bytes) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("initial state respects the configured geometry and capacities") {
    const auto [platoon, vfc] = build_initial_state(table_defaults(), 1);
    CHECK(platoon.n_vehicles == 10);
    CHECK(platoon.per_vehicle_capacity_bytes == 1000);
    CHECK(platoon.distance(1, 2) == doctest::Approx(20.0));
    CHECK(platoon.distance(1, 10) == doctest::Approx(180.0));
    CHECK(vfc.size() >= 1);
    CHECK(vfc.size() <= 10);
    for (const VfcVehicle& v : vfc.vehicles) {
        CHECK(v.capacity_bytes >= 600);
        CHECK(v.capacity_bytes <= 1500);
        CHECK(v.distance_to_leader_m > 0.0);
        CHECK(v.distance_to_leader_m <= 200.0);
    }
}

TEST_CASE("same seed builds the same world") {
    const auto [p1, v1] = build_initial_state(table_defaults(), 77);
    const auto [p2, v2] = build_initial_state(table_defaults(), 77);
    CHECK(p1.positions_m == p2.positions_m);
    CHECK(same_vfc(v1, v2));
}

TEST_CASE("K = 1 forces a single VFC vehicle") {
    ScenarioConfig cfg = table_defaults();
    cfg.k_max = 1;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto [platoon, vfc] = build_initial_state(cfg, seed);
        CHECK(vfc.size() == 1);
        for (int r = 0; r < 50; ++r) vfc = advance_vfc(vfc, cfg, seed);
        CHECK(vfc.size() == 1);
    }
}

TEST_CASE("K < 1 is rejected") {
    ScenarioConfig cfg = table_defaults();
    cfg.k_max = 0;
    CHECK_THROWS_AS(build_initial_state(cfg, 1), std::invalid_argument);
}

TEST_CASE("no arrivals and no departures leaves membership unchanged") {
    ScenarioConfig cfg = table_defaults();
    cfg.lambda_v = 0.0;
    cfg.mu_v = 0.0;
    auto [platoon, vfc] = build_initial_state(cfg, 5);
    const VfcState next = advance_vfc(vfc, cfg, 5);
    CHECK(next.round_index == vfc.round_index + 1);
    CHECK(same_vfc(vfc, next));
}

TEST_CASE("membership stays within [1, K] and sorted over 10k rounds") {
    ScenarioConfig cfg = table_defaults();  // lambda 9, mu 8, K 10
    auto [platoon, vfc] = build_initial_state(cfg, 3);
    for (int r = 0; r < 10000; ++r) {
        vfc = advance_vfc(vfc, cfg, 3);
        REQUIRE(vfc.size() >= 1);
        REQUIRE(vfc.size() <= 10);
        for (std::size_t k = 1; k < vfc.vehicles.size(); ++k) {
            REQUIRE(vfc.vehicles[k - 1].distance_to_leader_m <=
                    vfc.vehicles[k].distance_to_leader_m);
        }
    }
}

TEST_CASE("a full departure wave keeps one survivor") {
    ScenarioConfig cfg = table_defaults();
    cfg.lambda_v = 0.0;  // no arrivals ever
    cfg.mu_v = 1e9;      // departure probability ~1 for everyone
    cfg.k_max = 10;
    auto [platoon, vfc] = build_initial_state(cfg, 9);
    for (int r = 0; r < 20; ++r) {
        vfc = advance_vfc(vfc, cfg, 9);
        REQUIRE(vfc.size() == 1);
    }
}

TEST_CASE("surviving vehicles keep their capacity and distance") {
    ScenarioConfig cfg = table_defaults();
    auto [platoon, vfc] = build_initial_state(cfg, 13);
    std::map<int, std::pair<double, std::int64_t>> known;
    for (const VfcVehicle& v : vfc.vehicles) {
        known[v.vehicle_id] = {v.distance_to_leader_m, v.capacity_bytes};
    }
    for (int r = 0; r < 200; ++r) {
        vfc = advance_vfc(vfc, cfg, 13);
        for (const VfcVehicle& v : vfc.vehicles) {
            auto it = known.find(v.vehicle_id);
            if (it != known.end()) {
                CHECK(v.distance_to_leader_m == it->second.first);
                CHECK(v.capacity_bytes == it->second.second);
            } else {
                known[v.vehicle_id] = {v.distance_to_leader_m, v.capacity_bytes};
            }
        }
    }
}

TEST_CASE("long-run mean size is non-decreasing in lambda at fixed mu") {
    ScenarioConfig cfg = table_defaults();
    cfg.k_max = 40;
    cfg.mu_v = 8.0;
    cfg.arrival_scale = 0.35;
    double previous = 0.0;
    for (double lambda : {1.0, 4.0, 9.0, 16.0}) {
        cfg.lambda_v = lambda;
        auto [platoon, vfc] = build_initial_state(cfg, 31);
        double sum = 0.0;
        const int rounds = 20000;
        for (int r = 0; r < rounds; ++r) {
            vfc = advance_vfc(vfc, cfg, 31);
            sum += vfc.size();
        }
        const double mean = sum / rounds;
        CHECK(mean >= previous - 0.2);  // statistical slack
        previous = mean;
    }
}

TEST_CASE("calibrated arrival scale hits the target mean") {
    ScenarioConfig cfg = table_defaults();
    cfg.k_max = 40;
    for (double target : {5.0, 10.0, 15.0, 20.0}) {
        cfg.arrival_scale = calibrate_arrival_scale(target, cfg.lambda_v, cfg.mu_v, cfg.count_norm);
        auto [platoon, vfc] = build_initial_state(cfg, 17);
        double sum = 0.0;
        const int rounds = 30000;
        for (int r = 0; r < rounds; ++r) {
            vfc = advance_vfc(vfc, cfg, 17);
            sum += vfc.size();
        }
        const double mean = sum / rounds;
        CHECK(mean == doctest::Approx(target).epsilon(0.12));
    }
}

namespace {

struct RequestWorld {
    RatingLog test_log;
    UserProfiles profiles;
    VehicleAssignment assignment;
    PlatoonState platoon;
};

RequestWorld request_world() {
    RequestWorld w;
    std::vector<UserProfile> users;
    for (int u = 1; u <= 6; ++u) users.push_back({u, Gender::male, AgeCohort::age_25_34, 0});
    w.profiles = UserProfiles(std::move(users));
    w.assignment = assign_users(w.profiles, 3);  // 2 users per vehicle
    w.platoon = test::tiny_platoon(3);
    return w;
}

}  // namespace

TEST_CASE("poisson draws stay sane for large means") {
    Rng rng(5);
    double sum = 0.0;
    const int draws = 2000;
    for (int k = 0; k < draws; ++k) sum += rng.poisson(400.0);
    CHECK(sum / draws == doctest::Approx(400.0).epsilon(0.02));
}

TEST_CASE("a single held-out content is always drawn") {
    RequestWorld w = request_world();
    w.test_log.entries.push_back({3, 17, 4, 1});  // user 3 rides vehicle 2
    const RequestMatrix m = sample_requests(w.test_log, w.assignment, w.platoon, 5);
    REQUIRE(m.requests.size() == 1);
    CHECK(m.requests[0] == std::pair<int, int>{2, 17});
    CHECK(m.requesting_users.at({2, 17}) == std::vector<int>{3});
}

TEST_CASE("duplicate draws on one vehicle collapse into a single pair") {
    RequestWorld w = request_world();
    w.test_log.entries.push_back({1, 40, 4, 1});  // users 1 and 2 ride vehicle 1
    w.test_log.entries.push_back({2, 40, 5, 2});
    const RequestMatrix m = sample_requests(w.test_log, w.assignment, w.platoon, 6);
    REQUIRE(m.requests.size() == 1);
    CHECK(m.requests[0] == std::pair<int, int>{1, 40});
    CHECK(m.requesting_users.at({1, 40}) == std::vector<int>{1, 2});
}

TEST_CASE("request sampling replays under a fixed seed and draws from the test split") {
    RequestWorld w = request_world();
    Rng rng(1234);
    std::map<int, std::set<int>> held;  // user -> test contents
    for (int u = 1; u <= 6; ++u) {
        const int n = 1 + static_cast<int>(rng.below(6));
        for (int k = 0; k < n; ++k) {
            const int f = 1 + static_cast<int>(rng.below(50));
            w.test_log.entries.push_back({u, f, 3, k});
            held[u].insert(f);
        }
    }
    const RequestMatrix a = sample_requests(w.test_log, w.assignment, w.platoon, 77);
    const RequestMatrix b = sample_requests(w.test_log, w.assignment, w.platoon, 77);
    CHECK(a.requests == b.requests);
    for (const auto& [pair, users] : a.requesting_users) {
        for (int u : users) {
            CHECK(w.assignment.vehicle_of_user(u) == pair.first);
            CHECK(held[u].count(pair.second) == 1);
        }
    }
}
