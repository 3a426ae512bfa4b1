#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace arb {

using Engine = std::mt19937_64;

// Stream tags keep substreams of one master seed disjoint. Values are part of
// the reproducibility contract: never renumber.
enum class Stream : std::uint64_t {
  instance = 1,
  tuning_instance = 2,
  instance_params = 3,
  arm_noise = 4,
  arm_initial = 5,
  policy = 6,
  alpha_noise = 7,
};

std::uint64_t splitmix64(std::uint64_t x);

// Hash-chain derivation: seed(master, path) is a pure function of its inputs,
// so adding or reordering unrelated consumers never shifts another stream.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline std::uint64_t derive_seed(std::uint64_t master, Stream tag,
                                 std::initializer_list<std::uint64_t> rest = {}) {
  std::uint64_t s = derive_seed(master, {static_cast<std::uint64_t>(tag)});
  return rest.size() == 0 ? s : derive_seed(s, rest);
}

Engine make_engine(std::uint64_t seed);

// FNV-1a, stable across platforms (std::hash is not).
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace arb
