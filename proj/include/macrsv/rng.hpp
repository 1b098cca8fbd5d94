#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace macrsv {

// Deterministic xoshiro256** stream, seeded via splitmix64. Self-contained so
// that results are bit-identical across platforms and standard library
// versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    // Derive an independent child stream; (seed, tag) pairs map to
    // well-separated states.
    Rng fork(std::uint64_t tag) const {
        std::uint64_t mix = state_[0] ^ (tag * 0x9E3779B97F4A7C15ULL) ^ (state_[3] + tag);
        return Rng(splitmix64(mix));
    }

    std::uint64_t next_u64() {
        std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform integer in [0, n); rejection sampling keeps it exactly uniform.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t threshold = (~std::uint64_t{0} - n + 1) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Knuth's product-of-uniforms method, chunked so that large means never
    // underflow the running product.
    int poisson(double mean) {
        int total = 0;
        while (mean > 10.0) {
            total += poisson_small(10.0);
            mean -= 10.0;
        }
        return total + poisson_small(mean);
    }

    // k distinct values from items, order of selection preserved.
    template <typename T>
    std::vector<T> sample(const std::vector<T>& items, std::size_t k) {
        std::vector<T> pool = items;
        if (k > pool.size()) k = pool.size();
        std::vector<T> picked;
        picked.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + static_cast<std::size_t>(below(pool.size() - i));
            std::swap(pool[i], pool[j]);
            picked.push_back(pool[i]);
        }
        return picked;
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    int poisson_small(double mean) {
        if (mean <= 0.0) return 0;
        double limit = std::exp(-mean);
        int k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

    std::uint64_t state_[4];
};

}  // namespace macrsv
