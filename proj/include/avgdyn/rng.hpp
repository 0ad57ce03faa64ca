#pragma once

#include <cstdint>
#include <string_view>

namespace avgdyn {

// Counter-based generator: every output is a pure function of (key, counter),
// so replays are bit-identical across platforms and independent of call order.
class Rng {
public:
    explicit Rng(std::uint64_t key) : key_(key) {}

    std::uint64_t key() const { return key_; }

    // Stateless draw at an explicit counter.
    std::uint64_t at(std::uint64_t counter) const { return mix(key_ + golden * (counter + 1)); }

    // Sequential draws.
    std::uint64_t next() { return at(counter_++); }

    double next_unit() { return to_unit(next()); }
    double unit_at(std::uint64_t counter) const { return to_unit(at(counter)); }

    // +1/-1 with equal probability; one counter slot per node index.
    int rademacher_at(std::uint64_t node) const { return (at(node) >> 63) ? -1 : 1; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Uniform integer in [0, bound) via 128-bit multiply (no modulo bias worth
    // caring about at 64 bits of entropy).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    // Derived generator for an independent subtask; label keeps sibling
    // derivations from colliding.
    Rng split(std::string_view label, std::uint64_t index = 0) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        for (char c : label) h = mix(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
        return Rng(mix(key_ ^ h ^ mix(index + 0x632BE59BD9B4E019ull)));
    }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    static double to_unit(std::uint64_t bits) {
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

private:
    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace avgdyn
