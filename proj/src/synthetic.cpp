#include "vfcsim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unordered_set>
#include <vector>

#include "vfcsim/rng.hpp"

namespace vfcsim {

namespace {

const char* kGenres[] = {"Action", "Adventure", "Animation", "Children's", "Comedy", "Crime",
                         "Documentary", "Drama", "Fantasy", "Film-Noir", "Horror", "Musical",
                         "Mystery", "Romance", "Sci-Fi", "Thriller", "War", "Western"};
constexpr int kGenreCount = 18;
const int kAgeCodes[] = {1, 18, 25, 35, 45, 50, 56};

}  // namespace

SyntheticPaths write_synthetic_dataset(const std::string& dir, const SyntheticSpec& spec) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    SyntheticPaths paths{(fs::path(dir) / "users.dat").string(),
                         (fs::path(dir) / "movies.dat").string(),
                         (fs::path(dir) / "ratings.dat").string()};

    Rng rng(derive_seed(spec.seed, SeedStream::synthetic));

    struct User {
        int id;
        char gender;
        int age_code;
        int occupation;
    };
    std::vector<User> users;
    users.reserve(static_cast<std::size_t>(spec.n_users));
    for (int u = 1; u <= spec.n_users; ++u) {
        User user;
        user.id = u;
        user.gender = rng.bernoulli(0.5) ? 'M' : 'F';
        user.age_code = kAgeCodes[rng.below(7)];
        user.occupation = static_cast<int>(rng.below(21));
        users.push_back(user);
    }
    {
        std::ofstream out(paths.users);
        for (const User& u : users) {
            out << u.id << "::" << u.gender << "::" << u.age_code << "::" << u.occupation
                << "::00000\n";
        }
    }

    std::vector<std::vector<int>> genres_of(static_cast<std::size_t>(spec.n_contents) + 1);
    {
        std::ofstream out(paths.movies);
        for (int f = 1; f <= spec.n_contents; ++f) {
            const int n_genres = 1 + static_cast<int>(rng.below(3));
            std::unordered_set<int> picked;
            while (static_cast<int>(picked.size()) < n_genres) {
                picked.insert(static_cast<int>(rng.below(kGenreCount)));
            }
            std::vector<int> genres(picked.begin(), picked.end());
            std::sort(genres.begin(), genres.end());
            genres_of[static_cast<std::size_t>(f)] = genres;
            out << f << "::Movie " << f << " (" << 1970 + f % 50 << ")::";
            for (std::size_t k = 0; k < genres.size(); ++k) {
                if (k) out << "|";
                out << kGenres[genres[k]];
            }
            out << "\n";
        }
    }

    // Zipf popularity over contents.
    std::vector<double> cumulative(static_cast<std::size_t>(spec.n_contents));
    double total = 0.0;
    for (int f = 1; f <= spec.n_contents; ++f) {
        total += 1.0 / std::pow(static_cast<double>(f), spec.zipf_exponent);
        cumulative[static_cast<std::size_t>(f - 1)] = total;
    }
    auto draw_content = [&]() {
        const double u = rng.uniform01() * total;
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        return static_cast<int>(it - cumulative.begin()) + 1;
    };

    // Each demographic block leans toward a hash-picked subset of genres, so
    // persona-aware rankers have signal to find.
    auto block_affinity = [&](const User& u, int genre) {
        const std::uint64_t h = splitmix64(
            derive_seed(spec.seed, SeedStream::synthetic,
                        static_cast<std::uint64_t>(u.gender == 'M' ? 1 : 2) * 100 +
                            static_cast<std::uint64_t>(u.age_code),
                        static_cast<std::uint64_t>(genre)));
        return static_cast<double>(h % 2000) / 1000.0 - 1.0;  // [-1, 1)
    };

    {
        std::ofstream out(paths.ratings);
        std::int64_t timestamp = 978300000;
        for (const User& u : users) {
            const int want = spec.min_ratings_per_user +
                             static_cast<int>(rng.below(static_cast<std::uint64_t>(
                                 spec.max_ratings_per_user - spec.min_ratings_per_user + 1)));
            std::unordered_set<int> rated;
            int guard = 0;
            while (static_cast<int>(rated.size()) < want && guard++ < want * 50) {
                const int f = draw_content();
                if (!rated.insert(f).second) continue;
                double affinity = 0.0;
                for (int g : genres_of[static_cast<std::size_t>(f)]) {
                    affinity += block_affinity(u, g);
                }
                affinity /= static_cast<double>(genres_of[static_cast<std::size_t>(f)].size());
                const double noisy = 3.0 + 1.2 * affinity + (rng.uniform01() - 0.5);
                const int rating = std::clamp(static_cast<int>(std::lround(noisy)), 1, 5);
                out << u.id << "::" << f << "::" << rating << "::" << timestamp++ << "\n";
            }
        }
    }
    return paths;
}

}  // namespace vfcsim
