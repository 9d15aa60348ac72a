#pragma once
#include <cstdint>
#include <random>

namespace lf {

using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64/seed_seq(seed_lo,seed_hi,stream_lo,stream_hi)";

inline Rng make_rng(uint64_t seed, uint64_t stream = 0) {
    std::seed_seq sq{(uint32_t)seed, (uint32_t)(seed >> 32), (uint32_t)stream, (uint32_t)(stream >> 32)};
    return Rng(sq);
}

// 53-bit uniform in [0,1), identical on every platform
inline double uniform01(Rng& r) { return (double)(r() >> 11) * 0x1.0p-53; }
inline bool coin(Rng& r) { return (r() >> 63) != 0; }

}  // namespace lf
