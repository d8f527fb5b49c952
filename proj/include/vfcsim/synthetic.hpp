#pragma once

#include <cstdint>
#include <string>

namespace vfcsim {

// Deterministic generator of a MovieLens-1M-format dataset (users.dat,
// movies.dat, ratings.dat) with demographically skewed genre preferences and
// Zipf content popularity, for desk-scale runs without the real corpus.
struct SyntheticSpec {
    int n_users = 30;
    int n_contents = 2000;
    int min_ratings_per_user = 40;
    int max_ratings_per_user = 120;
    double zipf_exponent = 1.0;
    std::uint64_t seed = 1;
};

struct SyntheticPaths {
    std::string users;
    std::string movies;
    std::string ratings;
};

SyntheticPaths write_synthetic_dataset(const std::string& dir, const SyntheticSpec& spec);

}  // namespace vfcsim
