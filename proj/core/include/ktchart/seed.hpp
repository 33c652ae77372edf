#pragma once

#include <cstdint>

namespace ktchart {

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for item `index` of stream family `domain`.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index,
                                    std::uint64_t domain = 0) noexcept {
  return mix64(mix64(base ^ mix64(domain)) + index);
}

namespace seed_domain {
inline constexpr std::uint64_t phase1_window = 1;
inline constexpr std::uint64_t phase2_window = 2;
inline constexpr std::uint64_t segment = 3;
inline constexpr std::uint64_t bandwidth = 4;
}  // namespace seed_domain

}  // namespace ktchart
