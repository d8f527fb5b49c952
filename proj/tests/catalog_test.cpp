#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "support.hpp"
#include "vfcsim/catalog.hpp"

using namespace vfcsim;

namespace {

Dataset load_tiny(const std::string& tag, const std::string& users, const std::string& movies,
                  const std::string& ratings, std::int64_t size = 100) {
    const std::string dir = test::temp_dir(tag);
    return load_dataset(test::write_file(dir, "users.dat", users),
                        test::write_file(dir, "movies.dat", movies),
                        test::write_file(dir, "ratings.dat", ratings), size);
}

const char* kUsers =
    "1::F::1::10::48067\n"
    "2::M::56::16::70072\n"
    "3::M::25::15::55117\n";
const char* kMovies =
    "1::Toy Story (1995)::Animation|Children's|Comedy\n"
    "2::Jumanji (1995)::Adventure|Children's|Fantasy\n"
    "3::Heat (1995)::Action|Crime|Thriller\n";

}  // namespace

TEST_CASE("users.dat line becomes a profile with mapped cohorts") {
    const Dataset ds = load_tiny("cat-load", kUsers, kMovies, "1::2::4::978300760\n");
    REQUIRE(ds.users.size() == 3);
    const UserProfile& u1 = ds.users.at(1);
    CHECK(u1.gender == Gender::female);
    CHECK(u1.age == AgeCohort::under_18);
    CHECK(u1.occupation == 10);
    CHECK(std::string(occupation_name(u1.occupation)) == "K-12 student");
    CHECK(ds.users.at(2).age == AgeCohort::age_56_plus);
    CHECK(ds.users.at(3).age == AgeCohort::age_25_34);
    CHECK(ds.catalog.at(1).genres == std::vector<std::string>{"Animation", "Children's", "Comedy"});
    CHECK(ds.catalog.content_size_bytes() == 100);
}

TEST_CASE("empty ratings file is not an error") {
    const Dataset ds = load_tiny("cat-empty", kUsers, kMovies, "");
    CHECK(ds.ratings.entries.empty());
}

TEST_CASE("dangling references and duplicates are rejected with context") {
    CHECK_THROWS_WITH_AS(load_tiny("cat-dangle", kUsers, kMovies, "1::99999::4::978300760\n"),
                         doctest::Contains("unknown content 99999"), DatasetError);
    CHECK_THROWS_WITH_AS(load_tiny("cat-dangle2", kUsers, kMovies, "9::1::4::978300760\n"),
                         doctest::Contains("unknown user 9"), DatasetError);
    CHECK_THROWS_AS(load_tiny("cat-dupuser", "1::F::1::10::48067\n1::M::25::2::00000\n", kMovies, ""),
                    DatasetError);
    CHECK_THROWS_AS(
        load_tiny("cat-dupmovie", kUsers, "1::A::Drama\n1::B::Drama\n", ""), DatasetError);
}

TEST_CASE("malformed lines report the line number") {
    CHECK_THROWS_WITH_AS(load_tiny("cat-badline", kUsers, kMovies, "1::2::4::978300760\nnot a line\n"),
                         doctest::Contains("ratings.dat:2"), DatasetError);
    CHECK_THROWS_WITH_AS(load_tiny("cat-badrating", kUsers, kMovies, "1::2::9::978300760\n"),
                         doctest::Contains("rating outside [1,5]"), DatasetError);
}

TEST_CASE("reload is reproducible") {
    const Dataset a = load_tiny("cat-repro", kUsers, kMovies, "1::2::4::10\n2::3::5::11\n");
    const Dataset b = load_tiny("cat-repro2", kUsers, kMovies, "1::2::4::10\n2::3::5::11\n");
    REQUIRE(a.ratings.entries.size() == b.ratings.entries.size());
    for (std::size_t i = 0; i < a.ratings.entries.size(); ++i) {
        CHECK(a.ratings.entries[i].user_id == b.ratings.entries[i].user_id);
        CHECK(a.ratings.entries[i].content_id == b.ratings.entries[i].content_id);
        CHECK(a.ratings.entries[i].rating == b.ratings.entries[i].rating);
        CHECK(a.ratings.entries[i].timestamp == b.ratings.entries[i].timestamp);
    }
}

namespace {

RatingLog ratings_for_user(int user, int n) {
    RatingLog log;
    for (int k = 0; k < n; ++k) log.entries.push_back({user, k + 1, 3, 1000 + k});
    return log;
}

}  // namespace

TEST_CASE("split takes round(fraction*n) per user, at least one each way") {
    const RatingLog log = ratings_for_user(1, 10);
    const SplitRatings split = split_ratings(log, 0.2, 7);
    CHECK(split.train.entries.size() == 8);
    CHECK(split.test.entries.size() == 2);
}

TEST_CASE("split is deterministic under a fixed seed") {
    RatingLog log = ratings_for_user(1, 25);
    for (auto& e : ratings_for_user(2, 13).entries) log.entries.push_back(e);
    const SplitRatings a = split_ratings(log, 0.3, 42);
    const SplitRatings b = split_ratings(log, 0.3, 42);
    REQUIRE(a.test.entries.size() == b.test.entries.size());
    for (std::size_t i = 0; i < a.test.entries.size(); ++i) {
        CHECK(a.test.entries[i].content_id == b.test.entries[i].content_id);
        CHECK(a.test.entries[i].user_id == b.test.entries[i].user_id);
    }
    const SplitRatings c = split_ratings(log, 0.3, 43);
    bool same = a.test.entries.size() == c.test.entries.size();
    if (same) {
        for (std::size_t i = 0; i < a.test.entries.size(); ++i) {
            same = same && a.test.entries[i].content_id == c.test.entries[i].content_id &&
                   a.test.entries[i].user_id == c.test.entries[i].user_id;
        }
    }
    CHECK_FALSE(same);
}

TEST_CASE("single-rating users stay in train") {
    const RatingLog log = ratings_for_user(5, 1);
    const SplitRatings split = split_ratings(log, 0.5, 1);
    CHECK(split.train.entries.size() == 1);
    CHECK(split.test.entries.empty());
}

TEST_CASE("split partitions each user's ratings exactly") {
    RatingLog log;
    Rng rng(99);
    for (int u = 1; u <= 20; ++u) {
        const int n = 1 + static_cast<int>(rng.below(30));
        for (int k = 0; k < n; ++k) {
            log.entries.push_back({u, 1 + static_cast<int>(rng.below(500)), 1 + static_cast<int>(rng.below(5)),
                                   static_cast<std::int64_t>(k)});
        }
    }
    const SplitRatings split = split_ratings(log, 0.25, 3);
    CHECK(split.train.entries.size() + split.test.entries.size() == log.entries.size());

    auto key = [](const Rating& r) {
        return std::tuple<int, int, int, std::int64_t>{r.user_id, r.content_id, r.rating, r.timestamp};
    };
    std::multiset<std::tuple<int, int, int, std::int64_t>> original, recombined;
    for (const Rating& r : log.entries) original.insert(key(r));
    for (const Rating& r : split.train.entries) recombined.insert(key(r));
    for (const Rating& r : split.test.entries) recombined.insert(key(r));
    CHECK(original == recombined);

    std::map<int, std::pair<int, int>> per_user;  // user -> (train, test)
    for (const Rating& r : split.train.entries) per_user[r.user_id].first++;
    for (const Rating& r : split.test.entries) per_user[r.user_id].second++;
    for (const auto& [u, counts] : per_user) {
        const int total = counts.first + counts.second;
        if (total >= 2) {
            CHECK(counts.second >= 1);
            CHECK(counts.first >= 1);
        } else {
            CHECK(counts.second == 0);
        }
    }
}

namespace {

UserProfiles make_users(int n) {
    std::vector<UserProfile> users;
    for (int u = 1; u <= n; ++u) {
        users.push_back({u, Gender::male, AgeCohort::age_25_34, 0});
    }
    return UserProfiles(std::move(users));
}

}  // namespace

TEST_CASE("assignment blocks are contiguous ascending, leader first") {
    const VehicleAssignment a = assign_users(make_users(30), 10);
    CHECK(a.users_of_vehicle(1) == std::vector<int>{1, 2, 3});
    CHECK(a.users_of_vehicle(2) == std::vector<int>{4, 5, 6});
    CHECK(a.users_of_vehicle(10) == std::vector<int>{28, 29, 30});
    CHECK(a.vehicle_of_user(5) == 2);
}

TEST_CASE("single vehicle serves everyone") {
    const VehicleAssignment a = assign_users(make_users(7), 1);
    CHECK(a.users_of_vehicle(1).size() == 7);
}

TEST_CASE("uneven split balances block sizes") {
    const VehicleAssignment a = assign_users(make_users(7), 3);
    CHECK(a.users_of_vehicle(1) == std::vector<int>{1, 2, 3});
    CHECK(a.users_of_vehicle(2) == std::vector<int>{4, 5});
    CHECK(a.users_of_vehicle(3) == std::vector<int>{6, 7});
}

TEST_CASE("more vehicles than users is an error") {
    CHECK_THROWS_AS(assign_users(make_users(3), 4), DatasetError);
}

TEST_CASE("assignment partitions the user set for random sizes") {
    Rng rng(7);
    for (int it = 0; it < 50; ++it) {
        const int n_users = 1 + static_cast<int>(rng.below(60));
        const int n_vehicles = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_users)));
        const VehicleAssignment a = assign_users(make_users(n_users), n_vehicles);
        std::set<int> seen;
        std::size_t min_block = SIZE_MAX, max_block = 0;
        for (int v = 1; v <= n_vehicles; ++v) {
            const auto& block = a.users_of_vehicle(v);
            min_block = std::min(min_block, block.size());
            max_block = std::max(max_block, block.size());
            for (int u : block) CHECK(seen.insert(u).second);
        }
        CHECK(seen.size() == static_cast<std::size_t>(n_users));
        CHECK(max_block - min_block <= 1);
    }
}

TEST_CASE("truncation keeps lowest users and most-rated contents") {
    std::string ratings;
    // content 3 rated twice, content 1 once, content 2 never
    ratings += "1::3::4::1\n";
    ratings += "2::3::5::2\n";
    ratings += "3::1::3::3\n";
    const Dataset full = load_tiny("cat-trunc", kUsers, kMovies, ratings);
    const Dataset cut = truncate_dataset(full, 2, 1);
    CHECK(cut.users.size() == 2);
    CHECK(cut.users.contains(1));
    CHECK(cut.users.contains(2));
    REQUIRE(cut.catalog.size() == 1);
    CHECK(cut.catalog.contains(3));
    for (const Rating& r : cut.ratings.entries) {
        CHECK(cut.users.contains(r.user_id));
        CHECK(cut.catalog.contains(r.content_id));
    }
}
