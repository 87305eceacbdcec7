#include "heterosolve/rng.hpp"

namespace heterosolve {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t salt) noexcept {
    return mix_seed(mix_seed(master ^ trial) ^ mix_seed(salt));
}

}  // namespace heterosolve
