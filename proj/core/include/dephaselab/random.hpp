#pragma once

#include <cstdint>
#include <random>

namespace dephaselab {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based sub-seed: a pure function of (master, stream, index), so
/// realizations may run in any order or on any thread.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

// Stream tags keep the random numbers of different consumers disjoint.
namespace stream {
inline constexpr std::uint64_t kLevels = 0x4c45564c;      // "LEVL"
inline constexpr std::uint64_t kCoupling = 0x434f5550;    // "COUP"
inline constexpr std::uint64_t kBootstrap = 0x424f4f54;   // "BOOT"
inline constexpr std::uint64_t kRealization = 0x5245414c; // "REAL"
inline constexpr std::uint64_t kFormFactor = 0x464f524d;  // "FORM"
}  // namespace stream

}  // namespace dephaselab
