#include "glab/rng.hpp"

namespace glab {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t state = master;
    std::uint64_t h = splitmix64(state);
    for (std::uint64_t k : path) {
        // Mix the level index into the running hash before the next draw so
        // (1, 2) and (2, 1) land on different streams.
        state = h ^ (k * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL);
        h = splitmix64(state);
    }
    return h;
}

}  // namespace glab
