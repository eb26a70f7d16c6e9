#pragma once

#include <cmath>
#include <cstdint>

namespace fbmwalk {

/// Counter-based generator: every draw is a pure function of
/// (seed, domain, counter). No sequential state, so draws for distinct
/// indices can be produced in any order or in parallel and still match
/// a sequential run bit for bit.
class CounterRng {
  public:
    enum class Domain : std::uint64_t {
        Bernoulli = 0x42u,
        Gaussian = 0x47u,
    };

    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Raw 64 uniform bits for (domain, counter).
    std::uint64_t bits(Domain domain, std::uint64_t counter) const {
        // SplitMix64 finalizer over a keyed counter.
        std::uint64_t z = seed_;
        z += 0x9e3779b97f4a7c15ull * (counter + 1);
        z ^= static_cast<std::uint64_t>(domain) * 0xbf58476d1ce4e5b9ull;
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    /// +1 or -1, each with probability 1/2.
    double sign(std::uint64_t counter) const {
        return (bits(Domain::Bernoulli, counter) >> 63) ? 1.0 : -1.0;
    }

    /// Uniform on (0,1), never exactly 0 or 1.
    double uniform(Domain domain, std::uint64_t counter) const {
        return (static_cast<double>(bits(domain, counter) >> 11) + 0.5) *
               0x1.0p-53;
    }

    /// Standard normal via Box-Muller on counters (2i, 2i+1).
    double normal(std::uint64_t index) const {
        const double u1 = uniform(Domain::Gaussian, 2 * index);
        const double u2 = uniform(Domain::Gaussian, 2 * index + 1);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Stable per-stream seed for the k-th member of a seed schedule.
    static std::uint64_t schedule(std::uint64_t base, std::uint64_t k) {
        std::uint64_t z = base ^ (0xd1342543de82ef95ull * (k + 1));
        z ^= z >> 32;
        z *= 0xd6e8feb86659fd93ull;
        z ^= z >> 32;
        z *= 0xd6e8feb86659fd93ull;
        z ^= z >> 32;
        return z;
    }

  private:
    std::uint64_t seed_;
};

}  // namespace fbmwalk
