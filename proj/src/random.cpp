#include "aoa/random.hpp"

namespace aoa {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RandomStream RandomStream::split(std::uint64_t key) const
{
    return RandomStream(splitmix64(seed_ ^ splitmix64(key + 0x632be59bd9b4e019ULL)));
}

double RandomStream::uniform01()
{
    // 53 random bits, offset by half an ulp so neither endpoint is reachable.
    const auto bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform01();
}

double RandomStream::standard_normal()
{
    return normal_(engine_);
}

std::uint64_t RandomStream::below(std::uint64_t n)
{
    std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
    return dist(engine_);
}

}  // namespace aoa
