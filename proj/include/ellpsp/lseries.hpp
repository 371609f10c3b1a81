#pragma once

#include "bigint.hpp"
#include "curve_core.hpp"
#include "modarith.hpp"

#include <map>
#include <utility>

namespace ellpsp {

// L-series coefficients a_n of a curve, defined for all n through the usual
// Euler-product rules:
//
//   a_1 = 1
//   a_p = p + 1 - #E(F_p)          (the full projective count; at a bad
//                                   prime this is the singular-curve count,
//                                   which makes a_p one of {0, 1, -1})
//   a_{p^e} = a_p a_{p^{e-1}} - [good reduction] * p * a_{p^{e-2}}
//   a_{mn} = a_m a_n for coprime m, n.
//
// Prime-power values are memoized per instance; a context is cheap to copy
// and instances are independent, so concurrent use wants one context per
// thread rather than a shared one.
class LCoeffContext {
  public:
    explicit LCoeffContext(Curve curve) : curve_(std::move(curve)) {}

    const Curve& curve() const { return curve_; }

    Int a_p(const Int& p) const {
        if (p < 3 || p % 2 == 0 || !is_probable_prime(p))
            throw std::invalid_argument("a_p: p must be an odd prime");
        u64 count = detail::count_points_u64(to_u64(mod_reduce(curve_.A, p)),
                                             to_u64(mod_reduce(curve_.B, p)), to_u64(p));
        return p + 1 - count;
    }

    Int a_prime_power(const Int& p, unsigned e) const {
        if (e == 0) return 1;
        auto key = std::make_pair(p, e);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        Int value;
        if (e == 1) {
            value = a_p(p);
        } else {
            Int good = good_reduction(curve_, p) ? 1 : 0;
            value = a_prime_power(p, e - 1) * a_prime_power(p, 1) -
                    good * p * a_prime_power(p, e - 2);
        }
        cache_.emplace(std::move(key), value);
        return value;
    }

    Int a_n(const Factorization& N) const {
        Int value = 1;
        for (const auto& [p, e] : N.factors) value *= a_prime_power(p, e);
        return value;
    }

  private:
    Curve curve_;
    mutable std::map<std::pair<Int, unsigned>, Int> cache_;
};

}  // namespace ellpsp
