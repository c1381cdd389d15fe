#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cluerag {

// 64-bit FNV-1a. Stable across platforms and sessions; used for
// content-addressed ids and file checksums.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull);

// splitmix64 step; turns a counter or hash into a well-mixed stream.
std::uint64_t splitmix64(std::uint64_t& state);

// Content-addressed id: 32 lowercase hex digits derived from two independent
// FNV passes over the input. Collision odds are negligible at corpus scale.
std::string stable_id(std::string_view data);

}  // namespace cluerag
