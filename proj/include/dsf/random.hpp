#pragma once

#include <cstdint>
#include <string_view>

namespace dsf {

// Stable (platform independent) string hash.
constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded pseudo-random key for an item id. Sorting by this key is a seeded
// shuffle that depends only on the ids, not on their positions.
constexpr std::uint64_t keyed_hash(std::uint64_t seed, std::string_view id) {
  return splitmix64(seed ^ splitmix64(fnv1a64(id)));
}

}  // namespace dsf
