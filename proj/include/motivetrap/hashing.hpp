#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace motivetrap {

// SHA-256 of the raw bytes, as 64 lowercase hex characters.
std::string sha256_hex(std::string_view bytes);

// SplitMix64 finalizer; used to derive independent seeds from one base seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace motivetrap
