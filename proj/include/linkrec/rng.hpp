#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace linkrec {

// mt19937_64 output is fixed by the standard; the std:: distributions are
// not, so the helpers below are used everywhere a draw feeds the trajectory.
using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combination of two 64-bit words.
inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

/// FNV-1a, used to turn stream names into stable integers.
inline std::uint64_t hash_name(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Independent engine for a named purpose derived from a root seed.
inline Engine make_stream(std::uint64_t root_seed, std::string_view name) {
  return Engine(hash_combine(root_seed, hash_name(name)));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi]; returns lo when lo == hi.
inline double uniform_real(Engine& rng, double lo, double hi) {
  const double v = lo + (hi - lo) * uniform01(rng);
  return v > hi ? hi : v;
}

/// Uniform integer in [0, bound) by rejection; bound must be positive.
inline std::size_t uniform_index(Engine& rng, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % b);
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return static_cast<std::size_t>(r % b);
}

/// Fisher-Yates shuffle.
template <class T>
void shuffle(std::span<T> items, Engine& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniform_index(rng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace linkrec
