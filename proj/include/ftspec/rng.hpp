#pragma once

#include <cstdint>
#include <random>

namespace ftspec {

/// splitmix64 finalizer; decorrelates nearby integer seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for a work item. Derivation is a pure function of the inputs, so
/// per-member / per-restart streams are identical no matter which thread runs
/// them or in what order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
  return mix64(base + mix64(a + 1));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix64(derive_seed(base, a) + mix64(b + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace ftspec
