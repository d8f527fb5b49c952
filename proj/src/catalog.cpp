#include "vfcsim/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "vfcsim/rng.hpp"

namespace vfcsim {

namespace {

const char* kOccupations[kOccupationCount] = {
    "other",
    "academic/educator",
    "artist",
    "clerical/admin",
    "college/grad student",
    "customer service",
    "doctor/health care",
    "executive/managerial",
    "farmer",
    "homemaker",
    "K-12 student",
    "lawyer",
    "programmer",
    "retired",
    "sales/marketing",
    "scientist",
    "self-employed",
    "technician/engineer",
    "tradesman/craftsman",
    "unemployed",
    "writer",
};

std::vector<std::string> split_on(const std::string& line, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + sep.size();
    }
}

[[noreturn]] void fail_line(const std::string& path, std::size_t line_no, const std::string& what) {
    throw DatasetError(path + ":" + std::to_string(line_no) + ": " + what);
}

int parse_int(const std::string& s, const std::string& path, std::size_t line_no,
              const std::string& field) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail_line(path, line_no, "expected integer for " + field + ", got '" + s + "'");
    }
}

std::int64_t parse_i64(const std::string& s, const std::string& path, std::size_t line_no,
                       const std::string& field) {
    try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail_line(path, line_no, "expected integer for " + field + ", got '" + s + "'");
    }
}

}  // namespace

const char* to_string(Gender g) { return g == Gender::male ? "M" : "F"; }

const char* to_string(AgeCohort a) {
    switch (a) {
        case AgeCohort::under_18: return "Under 18";
        case AgeCohort::age_18_24: return "18-24";
        case AgeCohort::age_25_34: return "25-34";
        case AgeCohort::age_35_45: return "35-45";
        case AgeCohort::age_46_55: return "46-55";
        case AgeCohort::age_56_plus: return "56+";
    }
    return "?";
}

const char* occupation_name(int code) {
    if (code < 0 || code >= kOccupationCount) {
        throw DatasetError("occupation code out of range: " + std::to_string(code));
    }
    return kOccupations[code];
}

AgeCohort age_cohort_from_code(int age_code) {
    switch (age_code) {
        case 1: return AgeCohort::under_18;
        case 18: return AgeCohort::age_18_24;
        case 25: return AgeCohort::age_25_34;
        case 35: return AgeCohort::age_35_45;
        case 45:
        case 50: return AgeCohort::age_46_55;
        case 56: return AgeCohort::age_56_plus;
        default:
            throw DatasetError("unknown age code: " + std::to_string(age_code));
    }
}

ContentCatalog::ContentCatalog(std::vector<ContentItem> items, std::int64_t content_size_bytes)
    : items_(std::move(items)), content_size_bytes_(content_size_bytes) {
    if (content_size_bytes_ <= 0) throw DatasetError("content size must be positive");
    std::sort(items_.begin(), items_.end(),
              [](const ContentItem& a, const ContentItem& b) { return a.content_id < b.content_id; });
    index_.reserve(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (!index_.emplace(items_[i].content_id, i).second) {
            throw DatasetError("duplicate content id " + std::to_string(items_[i].content_id));
        }
    }
}

const ContentItem& ContentCatalog::at(int content_id) const {
    auto it = index_.find(content_id);
    if (it == index_.end()) throw DatasetError("unknown content id " + std::to_string(content_id));
    return items_[it->second];
}

UserProfiles::UserProfiles(std::vector<UserProfile> users) : users_(std::move(users)) {
    std::sort(users_.begin(), users_.end(),
              [](const UserProfile& a, const UserProfile& b) { return a.user_id < b.user_id; });
    index_.reserve(users_.size());
    for (std::size_t i = 0; i < users_.size(); ++i) {
        if (!index_.emplace(users_[i].user_id, i).second) {
            throw DatasetError("duplicate user id " + std::to_string(users_[i].user_id));
        }
    }
}

const UserProfile& UserProfiles::at(int user_id) const {
    auto it = index_.find(user_id);
    if (it == index_.end()) throw DatasetError("unknown user id " + std::to_string(user_id));
    return users_[it->second];
}

Dataset load_dataset(const std::string& users_path, const std::string& movies_path,
                     const std::string& ratings_path, std::int64_t content_size_bytes) {
    std::ifstream users_file(users_path);
    if (!users_file) throw DatasetError("cannot open " + users_path);
    std::vector<UserProfile> users;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(users_file, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_on(line, "::");
        if (fields.size() < 4) fail_line(users_path, line_no, "expected UserID::Gender::Age::Occupation[::Zip]");
        UserProfile u;
        u.user_id = parse_int(fields[0], users_path, line_no, "UserID");
        if (u.user_id <= 0) fail_line(users_path, line_no, "user ids must be positive");
        if (fields[1] == "M") {
            u.gender = Gender::male;
        } else if (fields[1] == "F") {
            u.gender = Gender::female;
        } else {
            fail_line(users_path, line_no, "gender must be M or F, got '" + fields[1] + "'");
        }
        int age_code = parse_int(fields[2], users_path, line_no, "Age");
        try {
            u.age = age_cohort_from_code(age_code);
        } catch (const DatasetError& e) {
            fail_line(users_path, line_no, e.what());
        }
        u.occupation = parse_int(fields[3], users_path, line_no, "Occupation");
        if (u.occupation < 0 || u.occupation >= kOccupationCount) {
            fail_line(users_path, line_no, "occupation code out of range: " + fields[3]);
        }
        users.push_back(u);
    }

    std::ifstream movies_file(movies_path);
    if (!movies_file) throw DatasetError("cannot open " + movies_path);
    std::vector<ContentItem> contents;
    line_no = 0;
    while (std::getline(movies_file, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_on(line, "::");
        if (fields.size() < 3) fail_line(movies_path, line_no, "expected MovieID::Title::Genres");
        ContentItem c;
        c.content_id = parse_int(fields[0], movies_path, line_no, "MovieID");
        if (c.content_id <= 0) fail_line(movies_path, line_no, "content ids must be positive");
        c.title = fields[1];
        c.genres = split_on(fields[2], "|");
        contents.push_back(std::move(c));
    }

    UserProfiles profiles(std::move(users));
    ContentCatalog catalog(std::move(contents), content_size_bytes);

    std::ifstream ratings_file(ratings_path);
    if (!ratings_file) throw DatasetError("cannot open " + ratings_path);
    RatingLog log;
    line_no = 0;
    while (std::getline(ratings_file, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_on(line, "::");
        if (fields.size() != 4) fail_line(ratings_path, line_no, "expected UserID::MovieID::Rating::Timestamp");
        Rating r;
        r.user_id = parse_int(fields[0], ratings_path, line_no, "UserID");
        r.content_id = parse_int(fields[1], ratings_path, line_no, "MovieID");
        r.rating = parse_int(fields[2], ratings_path, line_no, "Rating");
        r.timestamp = parse_i64(fields[3], ratings_path, line_no, "Timestamp");
        if (r.rating < 1 || r.rating > 5) fail_line(ratings_path, line_no, "rating outside [1,5]");
        if (!profiles.contains(r.user_id)) {
            fail_line(ratings_path, line_no, "rating references unknown user " + std::to_string(r.user_id));
        }
        if (!catalog.contains(r.content_id)) {
            fail_line(ratings_path, line_no, "rating references unknown content " + std::to_string(r.content_id));
        }
        log.entries.push_back(r);
    }

    return Dataset{std::move(profiles), std::move(catalog), std::move(log)};
}

Dataset truncate_dataset(Dataset ds, int max_users, int max_contents) {
    if (max_users > 0 && static_cast<std::size_t>(max_users) < ds.users.size()) {
        std::vector<UserProfile> kept(ds.users.users().begin(),
                                      ds.users.users().begin() + max_users);
        ds.users = UserProfiles(std::move(kept));
        RatingLog filtered;
        for (const Rating& r : ds.ratings.entries) {
            if (ds.users.contains(r.user_id)) filtered.entries.push_back(r);
        }
        ds.ratings = std::move(filtered);
    }
    if (max_contents > 0 && static_cast<std::size_t>(max_contents) < ds.catalog.size()) {
        std::unordered_map<int, int> count;
        for (const Rating& r : ds.ratings.entries) ++count[r.content_id];
        std::vector<ContentItem> items = ds.catalog.items();
        std::stable_sort(items.begin(), items.end(), [&](const ContentItem& a, const ContentItem& b) {
            int ca = count.count(a.content_id) ? count.at(a.content_id) : 0;
            int cb = count.count(b.content_id) ? count.at(b.content_id) : 0;
            if (ca != cb) return ca > cb;
            return a.content_id < b.content_id;
        });
        items.resize(static_cast<std::size_t>(max_contents));
        ds.catalog = ContentCatalog(std::move(items), ds.catalog.content_size_bytes());
        RatingLog filtered;
        for (const Rating& r : ds.ratings.entries) {
            if (ds.catalog.contains(r.content_id)) filtered.entries.push_back(r);
        }
        ds.ratings = std::move(filtered);
    }
    return ds;
}

SplitRatings split_ratings(const RatingLog& log, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw DatasetError("test_fraction must lie in (0,1)");
    }
    // Group entry indices per user, preserving file order within each user.
    std::vector<int> user_ids;
    std::unordered_map<int, std::vector<std::size_t>> per_user;
    for (std::size_t i = 0; i < log.entries.size(); ++i) {
        int u = log.entries[i].user_id;
        auto [it, inserted] = per_user.try_emplace(u);
        if (inserted) user_ids.push_back(u);
        it->second.push_back(i);
    }
    std::sort(user_ids.begin(), user_ids.end());

    SplitRatings out;
    std::vector<char> is_test(log.entries.size(), 0);
    for (int u : user_ids) {
        auto& idx = per_user[u];
        const std::size_t n = idx.size();
        if (n < 2) continue;  // all train
        std::size_t want = static_cast<std::size_t>(
            std::llround(test_fraction * static_cast<double>(n)));
        want = std::max<std::size_t>(1, std::min(want, n - 1));
        Rng rng(derive_seed(seed, SeedStream::split, static_cast<std::uint64_t>(u)));
        std::vector<std::size_t> order = idx;
        rng.shuffle(order);
        for (std::size_t k = 0; k < want; ++k) is_test[order[k]] = 1;
    }
    for (std::size_t i = 0; i < log.entries.size(); ++i) {
        (is_test[i] ? out.test : out.train).entries.push_back(log.entries[i]);
    }
    return out;
}

VehicleAssignment::VehicleAssignment(std::vector<std::vector<int>> users_of_vehicle)
    : users_of_vehicle_(std::move(users_of_vehicle)) {
    for (std::size_t v = 0; v < users_of_vehicle_.size(); ++v) {
        for (int u : users_of_vehicle_[v]) {
            vehicle_of_user_.emplace(u, static_cast<int>(v) + 1);
        }
    }
}

int VehicleAssignment::vehicle_of_user(int user_id) const {
    auto it = vehicle_of_user_.find(user_id);
    if (it == vehicle_of_user_.end()) {
        throw DatasetError("user " + std::to_string(user_id) + " is not assigned to a vehicle");
    }
    return it->second;
}

const std::vector<int>& VehicleAssignment::users_of_vehicle(int vehicle_index) const {
    if (vehicle_index < 1 || vehicle_index > n_vehicles()) {
        throw DatasetError("vehicle index out of range: " + std::to_string(vehicle_index));
    }
    return users_of_vehicle_[static_cast<std::size_t>(vehicle_index - 1)];
}

VehicleAssignment assign_users(const UserProfiles& profiles, int n_vehicles) {
    if (n_vehicles < 1) throw DatasetError("platoon size must be >= 1");
    const auto& users = profiles.users();
    if (static_cast<std::size_t>(n_vehicles) > users.size()) {
        throw DatasetError("platoon size " + std::to_string(n_vehicles) + " exceeds user count " +
                           std::to_string(users.size()) + "; a vehicle would serve no user");
    }
    const std::size_t n_users = users.size();
    const std::size_t base = n_users / static_cast<std::size_t>(n_vehicles);
    const std::size_t extra = n_users % static_cast<std::size_t>(n_vehicles);
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(n_vehicles));
    std::size_t pos = 0;
    for (std::size_t v = 0; v < blocks.size(); ++v) {
        std::size_t take = base + (v < extra ? 1 : 0);
        for (std::size_t k = 0; k < take; ++k) blocks[v].push_back(users[pos++].user_id);
    }
    return VehicleAssignment(std::move(blocks));
}

}  // namespace vfcsim
