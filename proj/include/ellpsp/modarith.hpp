#pragma once

#include "bigint.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace ellpsp {

// Extended gcd: g = gcd(a, b) >= 0 together with x, y so that a*x + b*y = g.
struct Egcd {
    Int g, x, y;
};

inline Egcd egcd(Int a, Int b) {
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Int q = a / b;
        a -= q * b;
        std::swap(a, b);
        x0 -= q * x1;
        std::swap(x0, x1);
        y0 -= q * y1;
        std::swap(y0, y1);
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    return {a, x0, y0};
}

// Least non-negative residue of a mod n (n >= 1).
inline Int mod_reduce(Int a, const Int& n) {
    a %= n;
    if (a < 0) a += n;
    return a;
}

// Jacobi symbol (a | n) for odd n >= 1. Multiplicative in both arguments and
// equal to the Legendre symbol when n is prime; (a | 1) = 1 by convention.
inline int jacobi(Int a, Int n) {
    if (n <= 0 || n % 2 == 0)
        throw std::invalid_argument("jacobi: lower argument must be odd and positive");
    a = mod_reduce(std::move(a), n);
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a >>= 1;
            Int m = n % 8;
            if (m == 3 || m == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

// p-adic valuation: the largest e with p^e | n. Requires p >= 2 and n != 0.
inline unsigned nu(const Int& p, Int n) {
    if (p < 2 || n == 0) throw std::invalid_argument("nu: need p >= 2 and n != 0");
    if (n < 0) n = -n;
    unsigned e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

// 2-adic valuation via the least-significant-bit index.
inline unsigned nu2(const Int& n) {
    if (n == 0) throw std::invalid_argument("nu2: zero has no finite valuation");
    return boost::multiprecision::lsb(n < 0 ? Int(-n) : n);
}

// Outcome of attempting to invert a mod n. Working over a composite modulus,
// a failed inversion is not an error: a proper gcd is a factor of n, and
// several algorithms downstream want exactly that factor.
struct ModInverse {
    enum class Kind { Inverse, FactorFound, ZeroDivisorTotal };
    Kind kind;
    Int value;  // the inverse, or the proper factor of n; 0 for the total case

    bool ok() const { return kind == Kind::Inverse; }
};

inline ModInverse inverse_or_factor(Int a, const Int& n) {
    if (n < 2) throw std::invalid_argument("inverse_or_factor: modulus must be >= 2");
    a = mod_reduce(std::move(a), n);
    Egcd e = egcd(a, n);
    if (e.g == 1) return {ModInverse::Kind::Inverse, mod_reduce(std::move(e.x), n)};
    if (e.g == n) return {ModInverse::Kind::ZeroDivisorTotal, 0};
    return {ModInverse::Kind::FactorFound, std::move(e.g)};
}

// Inverse of a unit mod n; throws if a is not invertible.
inline Int invert_unit(Int a, const Int& n) {
    ModInverse inv = inverse_or_factor(std::move(a), n);
    if (!inv.ok()) throw std::invalid_argument("invert_unit: argument is a zero divisor");
    return inv.value;
}

// Chinese remainder: the unique x in [0, prod m_i) with x = r_i mod m_i.
// Moduli must be pairwise coprime; the incremental gcd check detects any
// violation.
inline Int crt_combine(const std::vector<std::pair<Int, Int>>& congruences) {
    Int x = 0, modulus = 1;
    for (const auto& [r, m] : congruences) {
        if (m < 1) throw std::invalid_argument("crt_combine: moduli must be positive");
        Egcd e = egcd(modulus, m);
        if (e.g != 1) throw std::invalid_argument("crt_combine: moduli are not pairwise coprime");
        // x' = x + modulus * t with t chosen so x' = r mod m; e.x inverts
        // modulus mod m.
        Int t = mod_reduce((r - x) % m * e.x, m);
        x += modulus * t;
        modulus *= m;
    }
    return x;
}

// Deterministic Miller-Rabin. The 12-prime base set {2,...,37} is known to be
// exact for all n < 3.317e24, far beyond anything this library enumerates;
// larger inputs are rejected rather than silently answered heuristically.
inline bool is_probable_prime(const Int& n) {
    static const int bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (int p : bases) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    static const Int limit("3317044064679887385961981");
    if (n >= limit)
        throw std::invalid_argument("is_probable_prime: input beyond the deterministic base-set range");
    Int d = n - 1;
    unsigned s = nu2(d);
    d >>= s;
    for (int b : bases) {
        Int x = boost::multiprecision::powm(Int(b), d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// A positive integer together with its complete prime factorization,
// factors sorted by prime. Most of the library takes moduli in this form:
// the algorithms genuinely need the splitting, and carrying it in the type
// keeps "factored" from silently meaning "partially factored".
//
// Primes must fit in 64 bits, and the default contract is an odd modulus
// (construction rejects even input unless the caller explicitly permits it;
// group orders, for instance, are legitimately even).
struct Factorization {
    Int n = 1;
    std::vector<std::pair<Int, unsigned>> factors;  // (prime, exponent)

    static Factorization of(const Int& value, bool permit_even = false) {
        if (value < 1) throw std::invalid_argument("Factorization: value must be positive");
        if (!permit_even && value % 2 == 0)
            throw std::invalid_argument("Factorization: even modulus not permitted here");
        Factorization f;
        f.n = value;
        Int rest = value;
        auto strip = [&](const Int& p) {
            unsigned e = 0;
            while (rest % p == 0) {
                rest /= p;
                ++e;
            }
            if (e > 0) f.factors.emplace_back(p, e);
        };
        strip(2);
        for (Int d = 3; d <= 1'000'000 && d * d <= rest; d += 2) strip(d);
        if (rest > 1) {
            // No factor below 10^6: prime if below 10^12, otherwise ask
            // Miller-Rabin; a composite survivor is out of scope here.
            if (!is_probable_prime(rest))
                throw std::invalid_argument("Factorization: cofactor " + rest.str() +
                                            " resists trial division and is composite");
            // Copy first: strip() divides `rest` in place, so handing it a
            // reference into `rest` itself would mutate the divisor mid-loop.
            const Int cofactor = rest;
            strip(cofactor);
        }
        f.check_prime_sizes();
        return f;
    }

    // Assemble from an explicit factor list; validates primality, ordering,
    // exponents, and (by construction) the value of n.
    static Factorization from_factors(std::vector<std::pair<Int, unsigned>> factors,
                                      bool permit_even = false) {
        Factorization f;
        std::sort(factors.begin(), factors.end());
        for (const auto& [p, e] : factors) {
            if (e == 0) throw std::invalid_argument("Factorization: zero exponent");
            if (!is_probable_prime(p))
                throw std::invalid_argument("Factorization: " + p.str() + " is not prime");
            if (!permit_even && p == 2)
                throw std::invalid_argument("Factorization: even modulus not permitted here");
            if (!f.factors.empty() && f.factors.back().first == p)
                throw std::invalid_argument("Factorization: repeated prime " + p.str());
            for (unsigned i = 0; i < e; ++i) f.n *= p;
            f.factors.emplace_back(p, e);
        }
        f.check_prime_sizes();
        return f;
    }

    std::size_t distinct_primes() const { return factors.size(); }
    bool is_prime() const { return factors.size() == 1 && factors[0].second == 1; }
    bool is_prime_power() const { return factors.size() == 1; }
    bool is_squarefree() const {
        return std::all_of(factors.begin(), factors.end(),
                           [](const auto& pe) { return pe.second == 1; });
    }

    // Valuation of n at p, read off the table (0 if p does not divide n).
    unsigned exponent_of(const Int& p) const {
        for (const auto& [q, e] : factors)
            if (q == p) return e;
        return 0;
    }

  private:
    void check_prime_sizes() const {
        for (const auto& [p, e] : factors) {
            (void)e;
            if (p > std::numeric_limits<u64>::max())
                throw std::invalid_argument("Factorization: prime " + p.str() +
                                            " exceeds the supported 64-bit range");
        }
    }
};

// p^e as an Int; exponentiation by squaring on word-sized exponents.
inline Int int_pow(const Int& base, unsigned exp) {
    Int r = 1, b = base;
    while (exp) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

}  // namespace ellpsp
