#ifndef ASN_RANDOM_HPP
#define ASN_RANDOM_HPP

#include <cstdint>
#include <random>

namespace asn {

namespace detail {

// SplitMix64 finalizer; used only to spread seeds, never as the sampling engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Owning uniform stream over mt19937_64. Single-owner by design: concurrent
// consumers each derive their own substream instead of sharing one.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Top 53 bits mapped to the open interval (0, 1); inverse-transform
    // sampling must never see an endpoint.
    double uniform01() {
        const std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t next_raw() { return engine_(); }

    // Deterministic substream keyed on (master, n, k), so replication k of a
    // size-n study leg can run on any thread in any order.
    static RandomStream substream(std::uint64_t master, std::uint64_t n, std::uint64_t k) {
        std::uint64_t s = detail::splitmix64(master);
        s = detail::splitmix64(s ^ detail::splitmix64(n + 0x51ed270b4d1c3f27ULL));
        s = detail::splitmix64(s ^ detail::splitmix64(k + 0x9e6c63d0876a9b4bULL));
        return RandomStream(s);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace asn

#endif  // ASN_RANDOM_HPP
