#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace vfcsim {

enum class Gender : std::uint8_t { male, female };

// Six age cohorts. The MovieLens-1M age codes {1,18,25,35,45,50,56} fold into
// these: 45 and 50 both map to age_46_55.
enum class AgeCohort : std::uint8_t {
    under_18,
    age_18_24,
    age_25_34,
    age_35_45,
    age_46_55,
    age_56_plus,
};

inline constexpr int kOccupationCount = 21;

const char* to_string(Gender g);
const char* to_string(AgeCohort a);
const char* occupation_name(int code);  // 0..20, MovieLens-1M taxonomy
AgeCohort age_cohort_from_code(int age_code);

struct UserProfile {
    int user_id = 0;
    Gender gender = Gender::male;
    AgeCohort age = AgeCohort::under_18;
    int occupation = 0;  // 0..20
};

struct ContentItem {
    int content_id = 0;
    std::string title;
    std::vector<std::string> genres;
};

struct Rating {
    int user_id = 0;
    int content_id = 0;
    int rating = 0;  // 1..5
    std::int64_t timestamp = 0;
};

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Contents sorted by ascending id; every item shares one size.
class ContentCatalog {
public:
    ContentCatalog() = default;
    ContentCatalog(std::vector<ContentItem> items, std::int64_t content_size_bytes);

    const std::vector<ContentItem>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    std::int64_t content_size_bytes() const { return content_size_bytes_; }

    bool contains(int content_id) const { return index_.count(content_id) != 0; }
    const ContentItem& at(int content_id) const;

private:
    std::vector<ContentItem> items_;
    std::unordered_map<int, std::size_t> index_;
    std::int64_t content_size_bytes_ = 0;
};

class UserProfiles {
public:
    UserProfiles() = default;
    explicit UserProfiles(std::vector<UserProfile> users);

    const std::vector<UserProfile>& users() const { return users_; }
    std::size_t size() const { return users_.size(); }
    bool contains(int user_id) const { return index_.count(user_id) != 0; }
    const UserProfile& at(int user_id) const;

private:
    std::vector<UserProfile> users_;  // ascending user_id
    std::unordered_map<int, std::size_t> index_;
};

struct RatingLog {
    std::vector<Rating> entries;
};

struct Dataset {
    UserProfiles users;
    ContentCatalog catalog;
    RatingLog ratings;
};

// Reads the double-colon-delimited files (users.dat / movies.dat /
// ratings.dat). Reports malformed lines with file and line number, rejects
// duplicate ids and dangling references.
Dataset load_dataset(const std::string& users_path, const std::string& movies_path,
                     const std::string& ratings_path, std::int64_t content_size_bytes);

// Keeps the max_users lowest user ids and the max_contents most-rated
// contents (ties by ascending id), dropping ratings that no longer resolve.
// Zero or negative caps mean "keep all".
Dataset truncate_dataset(Dataset ds, int max_users, int max_contents);

struct SplitRatings {
    RatingLog train;
    RatingLog test;
};

// Seeded per-user split. A user with n >= 2 ratings contributes
// clamp(round(test_fraction*n), 1, n-1) entries to the test split; a user
// with one rating contributes it to train only.
SplitRatings split_ratings(const RatingLog& log, double test_fraction, std::uint64_t seed);

class VehicleAssignment {
public:
    VehicleAssignment() = default;
    explicit VehicleAssignment(std::vector<std::vector<int>> users_of_vehicle);

    int n_vehicles() const { return static_cast<int>(users_of_vehicle_.size()); }
    // 1-based platoon index (leader = 1)
    int vehicle_of_user(int user_id) const;
    const std::vector<int>& users_of_vehicle(int vehicle_index) const;

private:
    std::vector<std::vector<int>> users_of_vehicle_;
    std::unordered_map<int, int> vehicle_of_user_;
};

// Contiguous ascending id blocks, leader first, sizes differing by at most
// one. Throws when n_vehicles exceeds the user count.
VehicleAssignment assign_users(const UserProfiles& profiles, int n_vehicles);

}  // namespace vfcsim
