#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace vfcsim {

// Finalizer of the splitmix64 generator; used as a seed mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Named seed streams. Deriving every random draw from (master seed, stream,
// round, extra) keeps worlds identical across policies and sweep points: the
// request sequence and VFC evolution never depend on what a policy decided.
enum class SeedStream : std::uint64_t {
    split = 1,
    vfc_init,
    vfc_round,
    requests,
    random_policy,
    fading,
    synthetic,
    fuzz,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, SeedStream stream,
                                    std::uint64_t a = 0, std::uint64_t b = 0) noexcept {
    std::uint64_t s = splitmix64(master ^ 0x6a09e667f3bcc909ULL);
    s = splitmix64(s ^ static_cast<std::uint64_t>(stream));
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    return s;
}

// mt19937_64 with hand-rolled draws. The engine sequence is pinned by the
// standard, and rolling the distributions ourselves keeps seeded runs
// byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // [0, n), unbiased via rejection
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // inclusive range
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Knuth's product method, chunked so exp(-mean) never underflows for
    // large configured rates (Poisson(a + b) = Poisson(a) + Poisson(b)).
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        int count = 0;
        while (mean > 50.0) {
            count += poisson_knuth(50.0);
            mean -= 50.0;
        }
        return count + poisson_knuth(mean);
    }

    int binomial(int n, double p) {
        int count = 0;
        for (int i = 0; i < n; ++i) {
            if (bernoulli(p)) ++count;
        }
        return count;
    }

    double exponential(double mean) {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return -mean * std::log(u);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    int poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        double prod = 1.0;
        int count = -1;
        do {
            ++count;
            prod *= uniform01();
        } while (prod > limit);
        return count;
    }

    std::mt19937_64 eng_;
};

// FNV-1a, used for prompt digests and decision digests.
constexpr std::uint64_t fnv1a(const char* data, std::size_t n,
                              std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

}  // namespace vfcsim
