#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace ellpsp {

// Arbitrary-precision integer and exact rational. Every statistic in this
// library is an exact rational; floating point never enters a comparison
// against a theoretical bound.
using Int = boost::multiprecision::cpp_int;
using Ratio = boost::multiprecision::cpp_rational;

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Thrown when an exhaustive enumeration would exceed the configured cap.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cap on the number of points any exhaustive enumeration may touch.
// Overridable through the ELLPSP_ENUM_CAP environment variable, which is
// consulted on every call (enumerations check it once per request, so the
// getenv cost is irrelevant and changes take effect immediately).
inline u64 enum_cap() {
    if (const char* env = std::getenv("ELLPSP_ENUM_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) return static_cast<u64>(v);
    }
    return static_cast<u64>(1'000'000);
}

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Checked narrowing; enumeration sizes and scalar ranges at desk scale fit.
inline u64 to_u64(const Int& v) {
    if (v < 0 || v > std::numeric_limits<u64>::max())
        throw std::overflow_error("to_u64: value out of range: " + v.str());
    return v.convert_to<u64>();
}

// splitmix64: small, well-known generator. Every randomized experiment seeds
// one of these explicitly so that recorded runs replay bit-identically.
struct SplitMix64 {
    u64 state;

    explicit SplitMix64(u64 seed) : state(seed) {}

    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound), bound >= 1; rejection avoids modulo bias.
    u64 below(u64 bound) {
        if (bound == 0) throw std::invalid_argument("SplitMix64::below: zero bound");
        const u64 max = std::numeric_limits<u64>::max();
        const u64 zone = max - max % bound;
        for (;;) {
            u64 v = next();
            if (v < zone) return v % bound;
        }
    }
};

}  // namespace ellpsp
