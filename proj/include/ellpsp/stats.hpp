#pragma once

#include "bigint.hpp"
#include "curve_core.hpp"
#include "fp_analysis.hpp"
#include "modarith.hpp"
#include "psp.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

namespace ellpsp {

// Distribution of the 2-adic valuation of element orders in a rank-two
// abelian group Z/(2^s t) + Z/(2^r w) with s <= r and t, w odd. entries[x]
// is the probability that a uniformly random element (for the plain
// vector) or a uniformly random NON-identity element (for the "prime"
// vector) has order with 2-adic valuation x; indices run 0..r.
struct HVector {
    std::vector<Ratio> entries;
    unsigned s = 0, r = 0;
    Int q = 1;  // odd part t*w of the group size; 1 for the plain vector

    const Ratio& operator[](std::size_t i) const { return entries[i]; }
    std::size_t size() const { return entries.size(); }
};

// Plain vector: the group's odd part is irrelevant (odd factors never move
// the 2-adic valuation), so it is stated for Z/2^s + Z/2^r. Counting
// elements killed by 2^x gives the three-band closed form below.
inline HVector h_vector(unsigned s, unsigned r) {
    if (s > r) throw std::invalid_argument("h_vector: need s <= r");
    HVector v;
    v.s = s;
    v.r = r;
    Int denom = int_pow(2, r + s);
    v.entries.resize(r + 1);
    v.entries[0] = Ratio(1, denom);
    for (unsigned x = 1; x <= s; ++x) v.entries[x] = Ratio(3 * int_pow(2, 2 * x - 2), denom);
    for (unsigned x = s + 1; x <= r; ++x) v.entries[x] = Ratio(int_pow(2, s + x - 1), denom);
    return v;
}

// Non-identity-conditioned vector for Z/(2^s t) + Z/(2^r w): same band
// structure, but the identity is excluded from the x = 0 band and the
// denominator, and the odd part q = t w scales every count of positive
// valuation. Only the product q matters, so no divisibility between t and
// w is demanded. A group of size one has no non-identity elements and is
// rejected.
inline HVector h_prime_vector(unsigned s, unsigned r, const Int& t, const Int& w) {
    if (s > r) throw std::invalid_argument("h_prime_vector: need s <= r");
    if (t < 1 || w < 1 || t % 2 == 0 || w % 2 == 0)
        throw std::invalid_argument("h_prime_vector: odd parts must be odd and positive");
    Int q = t * w;
    Int size = int_pow(2, r + s) * q;
    if (size == 1) throw std::invalid_argument("h_prime_vector: trivial group has no "
                                               "non-identity elements");
    HVector v;
    v.s = s;
    v.r = r;
    v.q = q;
    Int denom = size - 1;
    v.entries.resize(r + 1);
    v.entries[0] = Ratio(q - 1, denom);
    for (unsigned x = 1; x <= s; ++x)
        v.entries[x] = Ratio(3 * int_pow(2, 2 * x - 2) * q, denom);
    for (unsigned x = s + 1; x <= r; ++x)
        v.entries[x] = Ratio(int_pow(2, s + x - 1) * q, denom);
    return v;
}

// <u, v> with the shorter vector zero-extended: the probability that two
// independent draws (one per group) share their 2-adic valuation.
inline Ratio dot(const HVector& u, const HVector& v) {
    Ratio acc = 0;
    std::size_t m = std::min(u.size(), v.size());
    for (std::size_t i = 0; i < m; ++i) acc += u.entries[i] * v.entries[i];
    return acc;
}

// One grid evaluation inside a verification report.
struct GridPoint {
    unsigned s1 = 0, r1 = 0;
    Int q1 = 1;
    unsigned s2 = 0, r2 = 0;
    Int q2 = 1;
    Ratio value;
};

struct MaxReport {
    bool pass = false;     // every admissible grid value is <= cap
    Ratio cap;
    Ratio max_value;       // maximum over the admissible grid
    std::vector<GridPoint> attainers;       // argmax set
    std::optional<GridPoint> violation;     // first value above cap, if any
    u64 pairs_checked = 0;
};

// Exhaustively confirm that <h(s1,r1), h(s2,r2)> <= 5/8 over the grid
// 0 <= s_i <= r_i <= grid_bound, under the one structural hypothesis the
// curve setting supplies: the first group has even exponent (r1 >= 1, the
// supersingular component's full order p + 1 is even). The maximum must be
// attained exactly at (1,1) x (1,1).
inline MaxReport verify_max_h(unsigned grid_bound) {
    MaxReport rep;
    rep.cap = Ratio(5, 8);
    rep.max_value = 0;
    for (unsigned r1 = 1; r1 <= grid_bound; ++r1)
        for (unsigned s1 = 0; s1 <= r1; ++s1) {
            HVector v1 = h_vector(s1, r1);
            for (unsigned r2 = 0; r2 <= grid_bound; ++r2)
                for (unsigned s2 = 0; s2 <= r2; ++s2) {
                    HVector v2 = h_vector(s2, r2);
                    Ratio val = dot(v1, v2);
                    ++rep.pairs_checked;
                    GridPoint gp{s1, r1, 1, s2, r2, 1, val};
                    if (val > rep.max_value) {
                        rep.max_value = val;
                        rep.attainers.clear();
                    }
                    if (val == rep.max_value) rep.attainers.push_back(gp);
                    if (val > rep.cap && !rep.violation) rep.violation = gp;
                }
        }
    rep.pass = !rep.violation.has_value();
    return rep;
}

// Same sweep for the non-identity-conditioned vectors: over the grid
// 0 <= s_i <= r_i <= grid_bound with odd parts q_i <= tw_bound, under the
// hypotheses that the first group has even exponent (r1 >= 1) and that at
// least one of the two groups has size >= 6 (the handful of smaller groups
// — Z/2, Z/4, Z/2+Z/2 and their pairings — are exactly the ones whose
// shared-valuation probability legitimately reaches 1). The cap is 9/11,
// attained by Z/2 against Z/6 + Z/2 shapes.
inline MaxReport verify_max_h_prime(unsigned grid_bound, unsigned tw_bound) {
    MaxReport rep;
    rep.cap = Ratio(9, 11);
    rep.max_value = 0;
    std::vector<std::tuple<unsigned, unsigned, Int>> shapes;
    for (unsigned r = 0; r <= grid_bound; ++r)
        for (unsigned s = 0; s <= r; ++s)
            for (Int q = 1; q <= tw_bound; q += 2)
                if (int_pow(2, r + s) * q > 1) shapes.emplace_back(s, r, q);
    for (const auto& [s1, r1, q1] : shapes) {
        if (r1 < 1) continue;
        HVector v1 = h_prime_vector(s1, r1, 1, q1);
        Int size1 = int_pow(2, r1 + s1) * q1;
        for (const auto& [s2, r2, q2] : shapes) {
            Int size2 = int_pow(2, r2 + s2) * q2;
            if (size1 < 6 && size2 < 6) continue;
            HVector v2 = h_prime_vector(s2, r2, 1, q2);
            Ratio val = dot(v1, v2);
            ++rep.pairs_checked;
            GridPoint gp{s1, r1, q1, s2, r2, q2, val};
            if (val > rep.max_value) {
                rep.max_value = val;
                rep.attainers.clear();
            }
            if (val == rep.max_value) rep.attainers.push_back(gp);
            if (val > rep.cap && !rep.violation) rep.violation = gp;
        }
    }
    rep.pass = !rep.violation.has_value();
    return rep;
}

// Empirical valuation distribution of one component group E(Z/p^a):
// entries[x] = proportion of points (all, or non-identity for the
// restricted mode) whose order has 2-adic valuation x. Computed by full
// enumeration; subject to the enumeration cap.
inline std::vector<Ratio> j_profile(const Curve& E, const Int& p, unsigned a,
                                    PointSet mode = PointSet::AllPoints) {
    Factorization F = Factorization::from_factors({{p, a}});
    std::vector<u64> hist;
    u64 total = 0;
    for (const ProjPoint& P : enumerate_points(E, p, a)) {
        if (mode == PointSet::StronglyNonZeroOnly &&
            classify(P) != PointClass::StronglyNonZero)
            continue;
        unsigned x = nu2(point_order(E, F, P));
        if (x >= hist.size()) hist.resize(x + 1, 0);
        ++hist[x];
        ++total;
    }
    if (total == 0) throw std::domain_error("j_profile: empty point selection");
    std::vector<Ratio> out(hist.size());
    for (std::size_t i = 0; i < hist.size(); ++i) out[i] = Ratio(hist[i], total);
    return out;
}

inline Ratio j_stat(const Curve& E, const Int& p, unsigned a, unsigned x) {
    std::vector<Ratio> prof = j_profile(E, p, a);
    return x < prof.size() ? prof[x] : Ratio(0);
}

// Product over components: the probability that independent uniform points
// in every component group share the valuation x.
inline Ratio h_stat(const Curve& E, const Factorization& N, unsigned x) {
    Ratio acc = 1;
    for (const auto& [p, e] : N.factors) acc *= j_stat(E, p, e, x);
    return acc;
}

// Sum over x of the h products: the probability that independent uniform
// component points all share SOME common valuation. One component gives 1;
// every extra component multiplies each term by a factor <= 1, so the
// statistic is monotone non-increasing under adding components.
inline Ratio g_stat(const Curve& E, const Factorization& N) {
    std::vector<std::vector<Ratio>> profs;
    std::size_t maxlen = 0;
    for (const auto& [p, e] : N.factors) {
        profs.push_back(j_profile(E, p, e));
        maxlen = std::max(maxlen, profs.back().size());
    }
    Ratio acc = 0;
    for (std::size_t x = 0; x < maxlen; ++x) {
        Ratio term = 1;
        for (const auto& prof : profs) term *= x < prof.size() ? prof[x] : Ratio(0);
        acc += term;
    }
    return acc;
}

// Proportion of points of E(Z/p^alpha) whose order is divisible by p —
// the points that can never arise as multiples of prime-to-p-order points.
// At least (p^{alpha-1} - 1)/p^{alpha-1}, with equality exactly when p does
// not divide #E(F_p).
inline Ratio incompat_proportion(const Curve& E, const Int& p, unsigned alpha) {
    if (alpha < 2) throw std::invalid_argument("incompat_proportion: need alpha >= 2");
    Factorization F = Factorization::from_factors({{p, alpha}});
    u64 total = 0, divisible = 0;
    for (const ProjPoint& P : enumerate_points(E, p, alpha)) {
        ++total;
        if (point_order(E, F, P) % p == 0) ++divisible;
    }
    return Ratio(divisible, total);
}

// Fraction of points (all, or strongly non-zero) of E(Z/N) passing the
// strong doubling-chain kernel with target N + 1. This is the quantity the
// 5/8 and 9/11 caps bound for gate-shaped instances; gates themselves are
// point-independent and not consulted here.
inline Ratio strong_g_point_fraction(const Curve& E, const Factorization& N, PointSet mode) {
    auto [s, t] = detail::decompose_pow2(N.n + 1);
    u64 total = 0, pass = 0;
    for (const ProjPoint& P : enumerate_points(E, N)) {
        if (mode == PointSet::StronglyNonZeroOnly &&
            classify(P) != PointClass::StronglyNonZero)
            continue;
        ++total;
        if (detail::strong_kernel(E, N, s, t, P).passed) ++pass;
    }
    if (total == 0)
        throw std::domain_error("strong_g_point_fraction: empty point selection");
    return Ratio(pass, total);
}

// Closed-form caps for the probability that two independent draws of
// (random good curve, random point) mod p and mod q share the 2-adic
// valuation of the point order.
inline Ratio nu2_equal_bound(const Int& p, const Int& q) {
    return Ratio(17 * p * q + 2 * p + 2 * q + 4, 32 * p * q);
}

inline Ratio nu2_equal_bound_snz(const Int& p, const Int& q) {
    return Ratio(78 * p * q - 5 * p - 5 * q + 12, 120 * p * q);
}

namespace detail {

// Average valuation profile over ALL good curves mod p, each curve's point
// distribution weighted equally (two-stage draw: curve first, then point).
inline std::vector<Ratio> average_nu2_profile(const Int& p, PointSet mode) {
    u64 pu = to_u64(p);
    std::vector<Ratio> acc;
    u64 curves = 0;
    for (u64 a = 0; a < pu; ++a)
        for (u64 b = 0; b < pu; ++b) {
            Curve E{Int(a), Int(b)};
            if (!good_reduction(E, p)) continue;
            ++curves;
            std::vector<Ratio> prof = j_profile(E, p, 1, mode);
            if (prof.size() > acc.size()) acc.resize(prof.size(), Ratio(0));
            for (std::size_t i = 0; i < prof.size(); ++i) acc[i] += prof[i];
        }
    for (Ratio& r : acc) r /= curves;
    return acc;
}

}  // namespace detail

// Exact probability of the all-components-share-a-valuation event under
// independent two-stage draws (uniform good curve, then uniform point) in
// every component of a squarefree N: the per-component average profiles
// multiply, then sum over the shared valuation.
inline Ratio nu2_equal_census(const Factorization& N, PointSet mode) {
    if (!N.is_squarefree() || N.distinct_primes() < 2)
        throw std::invalid_argument("nu2_equal_census: modulus must be squarefree with at "
                                    "least two primes");
    std::vector<std::vector<Ratio>> profs;
    std::size_t maxlen = 0;
    for (const auto& [p, e] : N.factors) {
        (void)e;
        profs.push_back(detail::average_nu2_profile(p, mode));
        maxlen = std::max(maxlen, profs.back().size());
    }
    Ratio acc = 0;
    for (std::size_t x = 0; x < maxlen; ++x) {
        Ratio term = 1;
        for (const auto& prof : profs) term *= x < prof.size() ? prof[x] : Ratio(0);
        acc += term;
    }
    return acc;
}

// A replayable Monte Carlo run against one of the closed-form caps.
struct ExperimentRecord {
    u64 seed = 0;
    Int n, p, q;
    u64 sample_size = 0;
    u64 hits = 0;
    Ratio observed;
    Ratio bound;
    PointSet mode = PointSet::AllPoints;
};

// The record's defining property, in exact arithmetic: the observation may
// not exceed the cap by more than three binomial standard deviations
// (diff^2 * n <= 9 * bound * (1 - bound) on the excess side).
inline bool within_three_sigma(const ExperimentRecord& rec) {
    if (rec.observed <= rec.bound) return true;
    Ratio diff = rec.observed - rec.bound;
    return diff * diff * rec.sample_size <= 9 * rec.bound * (1 - rec.bound);
}

// Sample the all-valuations-equal event for N = p q: per sample and per
// component, draw a uniform good curve by rejection, then a uniform point
// of its group (skipping the identity in the restricted mode), and compare
// the two valuations. Point data is memoized per curve, and the explicit
// seed makes the record bit-replayable.
inline ExperimentRecord random_curve_bound_check(const Factorization& N, const Int& p,
                                                 const Int& q, u64 samples, u64 seed,
                                                 PointSet mode) {
    if (samples < 1) throw std::invalid_argument("random_curve_bound_check: need samples >= 1");
    if (p < 5 || q < 5 || p == q)
        throw std::invalid_argument("random_curve_bound_check: need distinct odd primes >= 5");
    if (N.n != p * q || N.exponent_of(p) != 1 || N.exponent_of(q) != 1)
        throw std::invalid_argument("random_curve_bound_check: modulus must be exactly p*q");
    SplitMix64 rng(seed);
    std::map<std::tuple<Int, u64, u64>, std::vector<unsigned>> cache;
    auto draw = [&](const Int& prime) -> unsigned {
        u64 pu = to_u64(prime);
        for (;;) {
            u64 a = rng.below(pu);
            u64 b = rng.below(pu);
            Curve E{Int(a), Int(b)};
            if (!good_reduction(E, prime)) continue;
            auto key = std::make_tuple(prime, a, b);
            auto it = cache.find(key);
            if (it == cache.end()) {
                Factorization F = Factorization::from_factors({{prime, 1}});
                std::vector<unsigned> vals;
                for (const ProjPoint& P : enumerate_points(E, prime, 1))
                    vals.push_back(nu2(point_order(E, F, P)));
                it = cache.emplace(std::move(key), std::move(vals)).first;
            }
            const std::vector<unsigned>& vals = it->second;
            // enumerate_points lists the identity first
            if (mode == PointSet::StronglyNonZeroOnly)
                return vals[1 + rng.below(vals.size() - 1)];
            return vals[rng.below(vals.size())];
        }
    };
    ExperimentRecord rec;
    rec.seed = seed;
    rec.n = N.n;
    rec.p = p;
    rec.q = q;
    rec.sample_size = samples;
    rec.mode = mode;
    for (u64 i = 0; i < samples; ++i) {
        unsigned x1 = draw(p);
        unsigned x2 = draw(q);
        if (x1 == x2) ++rec.hits;
    }
    rec.observed = Ratio(rec.hits, samples);
    rec.bound = mode == PointSet::AllPoints ? nu2_equal_bound(p, q) : nu2_equal_bound_snz(p, q);
    return rec;
}

}  // namespace ellpsp
