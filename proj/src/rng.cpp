#include "robust_grad/rng.hpp"

namespace robust_grad {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))), engine_(key_) {}

Rng Rng::split(std::uint64_t key) const { return Rng(key_, key + 1); }

double Rng::uniform_open() {
    // 53 random mantissa bits, shifted off zero.
    for (;;) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

double Rng::normal() { return normal_(engine_); }

double Rng::exponential() { return exponential_(engine_); }

}  // namespace robust_grad
