#pragma once

#include <cstdint>
#include <random>

namespace cpd {

// splitmix64 finalizer; whitens seed/stream ids into seed material.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic per-stream generator. The pair (seed, stream) fully
/// determines the sequence, so work item m can always draw from stream m
/// no matter how repetitions are scheduled across threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) {
        const std::uint64_t a = mix64(seed);
        const std::uint64_t b = mix64(seed ^ 0xd1342543de82ef95ULL);
        const std::uint64_t c = mix64(stream ^ 0x2545f4914f6cdd1dULL);
        const std::uint64_t d = mix64(stream + 0x9e3779b97f4a7c15ULL);
        std::seed_seq seq{
            static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
            static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
            static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
            static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
        engine_.seed(seq);
    }

    std::mt19937_64& engine() { return engine_; }

    double normal() { return normal_(engine_); }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        double u;
        do {
            u = uniform_(engine_);
        } while (u <= 0.0 || u >= 1.0);
        return u;
    }

    double exponential() { return exp_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::exponential_distribution<double> exp_{1.0};
};

}  // namespace cpd
