#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace vnfscale {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Strict full-string parse; throws ParseError on trailing garbage.
double parse_double(std::string_view text, std::size_t row = 0);

// 64-bit FNV-1a, used for content hashes and model checksums.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t value);

// SplitMix64 step; derives independent sub-seeds from a root seed.
std::uint64_t splitmix64(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x9e3779b97f4a7c15ULL));
}

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace vnfscale
