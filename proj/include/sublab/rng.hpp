#pragma once

#include <cmath>
#include <cstdint>

namespace sublab::rng {

// Philox4x32-10 counter-based generator. Each (seed, stream) pair gives an
// independent substream; outputs depend only on (seed, stream, position), so
// results are reproducible regardless of how work is divided across threads.

namespace detail {
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
}  // namespace detail

/// One Philox4x32-10 block. Exposed so tests can check known-answer vectors.
inline void philox4x32_10(const std::uint32_t ctr[4], std::uint32_t k0, std::uint32_t k1,
                          std::uint32_t out[4]) {
    std::uint32_t x0 = ctr[0], x1 = ctr[1], x2 = ctr[2], x3 = ctr[3];
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(detail::kMul0) * x0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(detail::kMul1) * x2;
        const std::uint32_t y0 = static_cast<std::uint32_t>(p1 >> 32) ^ x1 ^ k0;
        const std::uint32_t y1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t y2 = static_cast<std::uint32_t>(p0 >> 32) ^ x3 ^ k1;
        const std::uint32_t y3 = static_cast<std::uint32_t>(p0);
        x0 = y0;
        x1 = y1;
        x2 = y2;
        x3 = y3;
        k0 += detail::kWeyl0;
        k1 += detail::kWeyl1;
    }
    out[0] = x0;
    out[1] = x1;
    out[2] = x2;
    out[3] = x3;
}

// Counter layout per block: (position lo32, position hi32, stream lo32, stream hi32).
// Key: (seed lo32, seed hi32). One block yields four 32-bit words, consumed as
// two 64-bit values (w1<<32|w0 first, then w3<<32|w2).
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          ctr2_(static_cast<std::uint32_t>(stream)),
          ctr3_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint64_t next_u64() {
        if (have_ == 0) {
            const std::uint32_t ctr[4] = {static_cast<std::uint32_t>(block_),
                                          static_cast<std::uint32_t>(block_ >> 32), ctr2_, ctr3_};
            philox4x32_10(ctr, key0_, key1_, out_);
            have_ = 2;
            ++block_;
        }
        --have_;
        const int i = 2 * (1 - have_);  // first draw uses words 0,1; second 2,3
        return (static_cast<std::uint64_t>(out_[i + 1]) << 32) | out_[i];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1); redraws the zero (probability 2^-53).
    double next_unit_open() {
        for (;;) {
            const double u = next_double();
            if (u > 0.0) return u;
        }
    }

    /// Exponential variate with the given rate.
    double next_exp(double rate) { return -std::log(next_unit_open()) / rate; }

private:
    std::uint32_t key0_, key1_;
    std::uint32_t ctr2_, ctr3_;
    std::uint64_t block_ = 0;
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int have_ = 0;
};

}  // namespace sublab::rng
