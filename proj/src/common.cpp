#include "declearn/common.hpp"

namespace declearn {

std::uint64_t sub_seed(std::uint64_t root, std::string_view stream) {
  // FNV-1a over the root seed bytes and the stream name, then one splitmix
  // finalization round. Stable across platforms and builds.
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](unsigned char b) {
    h ^= b;
    h *= 1099511628211ULL;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(root >> (8 * i)));
  for (char c : stream) mix(static_cast<unsigned char>(c));
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

}  // namespace declearn
