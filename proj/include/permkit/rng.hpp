#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace permkit {

/// Counter-based generator (philox4x32-10). A block cipher over a 128-bit
/// counter keyed by a 64-bit seed: draw k of stream s is a pure function of
/// (seed, s, k), so parallel consumers need no shared state and results do
/// not depend on evaluation order.
class Philox {
public:
    static std::array<uint32_t, 4> block(uint64_t key, uint64_t ctr_lo, uint64_t ctr_hi) {
        uint32_t c0 = static_cast<uint32_t>(ctr_lo);
        uint32_t c1 = static_cast<uint32_t>(ctr_lo >> 32);
        uint32_t c2 = static_cast<uint32_t>(ctr_hi);
        uint32_t c3 = static_cast<uint32_t>(ctr_hi >> 32);
        uint32_t k0 = static_cast<uint32_t>(key);
        uint32_t k1 = static_cast<uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = kMul0 * static_cast<uint64_t>(c0);
            const uint64_t p1 = kMul1 * static_cast<uint64_t>(c2);
            const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
            const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return {c0, c1, c2, c3};
    }

private:
    static constexpr uint32_t kMul0 = 0xD2511F53u;
    static constexpr uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Two 64-bit words from one cipher block.
inline std::array<uint64_t, 2> philox_u64x2(uint64_t key, uint64_t ctr_lo, uint64_t ctr_hi) {
    const auto b = Philox::block(key, ctr_lo, ctr_hi);
    return {static_cast<uint64_t>(b[0]) | (static_cast<uint64_t>(b[1]) << 32),
            static_cast<uint64_t>(b[2]) | (static_cast<uint64_t>(b[3]) << 32)};
}

/// Uniform double in the open interval (0, 1).
inline double u64_to_open_unit(uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal draw indexed by (seed, stream, counter) via Box-Muller.
inline double philox_normal(uint64_t seed, uint64_t stream, uint64_t counter) {
    const auto u = philox_u64x2(seed, counter, stream);
    const double u1 = u64_to_open_unit(u[0]);
    const double u2 = u64_to_open_unit(u[1]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform double in [lo, hi) indexed by (seed, stream, counter).
inline double philox_uniform(uint64_t seed, uint64_t stream, uint64_t counter, double lo = 0.0,
                             double hi = 1.0) {
    const auto u = philox_u64x2(seed, counter, stream);
    return lo + (hi - lo) * u64_to_open_unit(u[0]);
}

/// Small sequential convenience wrapper over the counter-based core.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return philox_uniform(seed_, stream_, ctr_++, lo, hi); }
    double normal() { return philox_normal(seed_, stream_, ctr_++); }
    uint64_t next_u64() { return philox_u64x2(seed_, ctr_++, stream_)[0]; }
    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) { return next_u64() % n; }

private:
    uint64_t seed_;
    uint64_t stream_;
    uint64_t ctr_ = 0;
};

/// Streaming pairwise summation (binary-counter merge): deterministic for a
/// given push sequence, rounding error O(log n) instead of O(n).
class PairwiseAccumulator {
public:
    void push(double x) {
        size_t lvl = 0;
        for (uint64_t m = count_; m & 1; m >>= 1, ++lvl) x += stack_[lvl];
        if (lvl >= stack_.size()) stack_.resize(lvl + 1, 0.0);
        stack_[lvl] = x;
        ++count_;
    }

    double sum() const {
        double s = 0.0;
        uint64_t m = count_;
        for (size_t lvl = 0; m != 0; ++lvl, m >>= 1)
            if (m & 1) s += stack_[lvl];
        return s;
    }

    uint64_t count() const { return count_; }

private:
    std::vector<double> stack_;
    uint64_t count_ = 0;
};

}  // namespace permkit
