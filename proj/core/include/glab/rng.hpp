#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace glab {

using Rng = std::mt19937_64;

/// One step of the SplitMix64 sequence; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Derives an independent stream seed from a master seed and a task path,
/// e.g. derive_seed(master, {beta_index, length_index, replicate}).
/// The result depends only on the arguments, never on call order.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) noexcept;

inline Rng make_rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s))};
    return Rng(seq);
}

}  // namespace glab
